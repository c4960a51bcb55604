//! Special-function substrate: exact Bernoulli numbers, periodic Bernoulli
//! functions, half-integer Gamma ratios and the error function.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest even index kept in the Bernoulli table.
pub const MAX_BERNOULLI_INDEX: usize = 120;

/// Exact even-index Bernoulli numbers `b_0, b_2, ..., b_max` with cached `f64` values.
///
/// Built once from the recurrence `sum_{k=0}^{n} C(n+1, k) B_k = 0` (with
/// `B_1 = -1/2`) and immutable afterwards.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    max_even_index: usize,
    exact: Vec<BigRational>,
    approx: Vec<f64>,
}

impl BernoulliTable {
    pub fn new(max_even_index: usize) -> Self {
        let max_even_index = max_even_index & !1;
        let all = bernoulli_all(max_even_index);
        let exact: Vec<BigRational> = all.into_iter().step_by(2).collect();
        let approx = exact
            .iter()
            .map(|b| b.to_f64().expect("Bernoulli number representable as f64"))
            .collect();
        Self {
            max_even_index,
            exact,
            approx,
        }
    }

    /// Shared table up to [`MAX_BERNOULLI_INDEX`].
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(|| BernoulliTable::new(MAX_BERNOULLI_INDEX))
    }

    pub fn max_even_index(&self) -> usize {
        self.max_even_index
    }

    fn check(&self, n: usize) -> Result<usize> {
        if n % 2 == 1 {
            return Err(Error::domain(format!(
                "Bernoulli index {n} is odd; only even indices are tabulated"
            )));
        }
        if n > self.max_even_index {
            return Err(Error::domain(format!(
                "Bernoulli index {n} exceeds table limit {}",
                self.max_even_index
            )));
        }
        Ok(n / 2)
    }

    pub fn exact(&self, n: usize) -> Result<&BigRational> {
        self.check(n).map(|i| &self.exact[i])
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        self.check(n).map(|i| self.approx[i])
    }
}

/// All Bernoulli numbers `B_0..=B_max` (odd ones included) from the binomial recurrence.
fn bernoulli_all(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    b.push(BigRational::one());
    // binom holds row n+1 of Pascal's triangle while computing B_n.
    let mut binom: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for n in 1..=max {
        let mut next = vec![BigInt::one(); n + 2];
        for k in 1..=n {
            next[k] = &binom[k - 1] + &binom[k];
        }
        binom = next;
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom[k].clone());
            }
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Exact Bernoulli number `b_n` for even `2 <= n <= 120`.
pub fn bernoulli_number(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain(
            "Bernoulli index must be a positive even integer",
        ));
    }
    BernoulliTable::global().exact(n).cloned()
}

/// `b_n` as a float; same domain as [`bernoulli_number`].
pub fn bernoulli_f64(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain(
            "Bernoulli index must be a positive even integer",
        ));
    }
    BernoulliTable::global().value(n)
}

/// The 1-periodic extension of the Bernoulli polynomial `B_order` restricted to `[0, 1)`.
#[derive(Debug, Clone)]
pub struct PeriodicBernoulli {
    order: usize,
    /// Coefficients of `B_order(x)` in increasing powers of `x`.
    coefficients: Vec<f64>,
}

impl PeriodicBernoulli {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 || order % 2 == 1 || order > MAX_BERNOULLI_INDEX {
            return Err(Error::domain(format!(
                "periodic Bernoulli order {order} must be even and in 2..={MAX_BERNOULLI_INDEX}"
            )));
        }
        // B_m(x) = sum_k C(m, k) B_k x^{m-k}; exact rationals, rounded once.
        let all = bernoulli_all(order);
        let mut coefficients = vec![0.0; order + 1];
        let mut c = BigInt::one();
        for (k, bk) in all.iter().enumerate() {
            if k > 0 {
                c = c * BigInt::from(order + 1 - k) / BigInt::from(k);
            }
            let coeff = bk * BigRational::from_integer(c.clone());
            coefficients[order - k] = coeff.to_f64().unwrap_or(f64::NAN);
        }
        Ok(Self {
            order,
            coefficients,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = t - t.floor();
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }
}

/// `B~_order(t)`, the periodic Bernoulli function.
pub fn periodic_bernoulli(order: usize, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain("periodic Bernoulli argument must be finite"));
    }
    Ok(PeriodicBernoulli::new(order)?.eval(t))
}

/// `Gamma(p + 1/2) / (p! Gamma(1/2))`, by the product recurrence.
pub fn gamma_half_ratio(p: u64) -> f64 {
    let mut r = 1.0;
    for k in 0..p {
        let k = k as f64;
        r *= (k + 0.5) / (k + 1.0);
    }
    r
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Series used for `|x| <= 2`: `erf x = 2/sqrt(pi) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// Continued fraction for `erfc x`, `x > 2`.
fn erfc_continued_fraction(x: f64) -> f64 {
    if x > 27.3 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

/// Error function, absolute accuracy better than `1e-14`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax <= 2.0 {
        erf_series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    v.copysign(x)
}

/// Complementary error function `1 - erf(x)`, accurate in relative terms for large `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x > 2.0 {
        erfc_continued_fraction(x)
    } else if x >= -2.0 {
        1.0 - erf(x)
    } else {
        2.0 - erfc_continued_fraction(-x)
    }
}
