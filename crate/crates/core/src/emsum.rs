//! Euler-Maclaurin summation and optimally truncated asymptotic series.

use crate::error::{Error, Result};
use crate::quad::{integrate_interval, QuadSpec};
use crate::special::{bernoulli_f64, gamma_half_ratio, MAX_BERNOULLI_INDEX};

/// Largest correction order accepted by [`em_sum`].
pub const MAX_EM_ORDER: usize = 10;

/// Largest derivative order the finite-difference mode will attempt.
pub const MAX_FINITE_DIFFERENCE_ORDER: usize = 5;

/// How derivatives of a [`SmoothFunction`] are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with one Richardson step; `scale` sets the step length.
    FiniteDifference {
        scale: f64,
    },
}

type Value<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;
type Derivative<'a> = Box<dyn Fn(usize, f64) -> f64 + Send + Sync + 'a>;

/// A real function together with a way of differentiating it.
pub struct SmoothFunction<'a> {
    value: Value<'a>,
    derivative: Option<Derivative<'a>>,
    mode: DerivativeMode,
}

impl<'a> SmoothFunction<'a> {
    /// `derivative(m, t)` must return the `m`-th derivative for every `m >= 1`.
    pub fn analytic(
        value: impl Fn(f64) -> f64 + Send + Sync + 'a,
        derivative: impl Fn(usize, f64) -> f64 + Send + Sync + 'a,
    ) -> Self {
        Self {
            value: Box::new(value),
            derivative: Some(Box::new(derivative)),
            mode: DerivativeMode::Analytic,
        }
    }

    pub fn finite_difference(
        value: impl Fn(f64) -> f64 + Send + Sync + 'a,
        scale: f64,
    ) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain("finite-difference scale must be positive"));
        }
        Ok(Self {
            value: Box::new(value),
            derivative: None,
            mode: DerivativeMode::FiniteDifference { scale },
        })
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, order: usize, t: f64) -> Result<f64> {
        if order == 0 {
            return Ok(self.value(t));
        }
        let v = match (self.mode, &self.derivative) {
            (DerivativeMode::Analytic, Some(d)) => d(order, t),
            (DerivativeMode::FiniteDifference { scale }, _) => {
                if order > MAX_FINITE_DIFFERENCE_ORDER {
                    return Err(Error::Derivative(format!(
                        "finite differences are limited to order {MAX_FINITE_DIFFERENCE_ORDER}, \
                         order {order} needs an analytic derivative"
                    )));
                }
                let h = f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * scale;
                let coarse = self.central_difference(order, t, h);
                let fine = self.central_difference(order, t, 0.5 * h);
                (4.0 * fine - coarse) / 3.0
            }
            (DerivativeMode::Analytic, None) => {
                return Err(Error::Derivative(
                    "analytic mode without a derivative".into(),
                ))
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Derivative(format!(
                "order-{order} derivative at t = {t} is not finite"
            )))
        }
    }

    /// `h^{-m} sum_k (-1)^k C(m, k) f(t + (m/2 - k) h)`, second-order accurate.
    fn central_difference(&self, order: usize, t: f64, h: f64) -> f64 {
        let m = order as f64;
        let mut binom = 1.0;
        let mut acc = 0.0;
        for k in 0..=order {
            if k > 0 {
                binom = binom * (m - k as f64 + 1.0) / k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * self.value(t + (0.5 * m - k as f64) * h);
        }
        acc / h.powi(order as i32)
    }
}

impl std::fmt::Debug for SmoothFunction<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmSum {
    pub estimate: f64,
    /// `b_{2n}/(2n)! [f^{(2n-1)}(N) - f^{(2n-1)}(0)]` for `n = 1..=r`.
    pub correction_terms: Vec<f64>,
    pub remainder_bound: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Euler-Maclaurin estimate of `sum_{p=0}^{N} f(p)` with `r` Bernoulli corrections.
pub fn em_sum(f: &SmoothFunction<'_>, n_upper: u64, r: usize) -> Result<EmSum> {
    if r == 0 || r > MAX_EM_ORDER {
        return Err(Error::domain(format!(
            "correction order r = {r} must lie in 1..={MAX_EM_ORDER}"
        )));
    }
    let upper = n_upper as f64;
    let spec = QuadSpec::new(1e-14, 1e-15, 100_000, 1e-16)?;
    let value = |t: f64| f.value(t);
    let integral = integrate_interval(&value, 0.0, upper, &spec)?.value;

    let mut estimate = integral + 0.5 * (f.value(upper) + f.value(0.0));
    let mut correction_terms = Vec::with_capacity(r);
    for n in 1..=r {
        let coeff = bernoulli_f64(2 * n)? / factorial(2 * n);
        let odd = 2 * n - 1;
        let term = coeff * (f.derivative(odd, upper)? - f.derivative(odd, 0.0)?);
        correction_terms.push(term);
        estimate += term;
    }

    // The derivative closure cannot return errors through the integrator, so probe first.
    f.derivative(2 * r, 0.5 * upper)?;
    let top = |t: f64| f.derivative(2 * r, t).map(f64::abs).unwrap_or(f64::NAN);
    // Only an upper bound is needed, so an unconverged run still counts (value plus its error).
    let abs_integral = if upper > 0.0 {
        match integrate_interval(
            &top,
            0.0,
            upper,
            &QuadSpec::new(1e-8, 1e-300, 2_000, 1e-16)?,
        ) {
            Ok(r) => r.value + r.error_estimate,
            Err(Error::NonConvergence {
                partial,
                error_estimate,
                ..
            }) => partial + error_estimate,
            Err(e) => return Err(e),
        }
    } else {
        0.0
    };
    if abs_integral.is_nan() {
        return Err(Error::Derivative(
            "derivative evaluation failed inside the remainder integral".into(),
        ));
    }
    let remainder_bound = bernoulli_f64(2 * r)?.abs() / factorial(2 * r) * abs_integral;
    Ok(EmSum {
        estimate,
        correction_terms,
        remainder_bound,
    })
}

/// Truncated asymptotic series together with its error indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    /// Retained terms `a_1..a_k`.
    pub terms: Vec<f64>,
    /// Number of retained terms `k`.
    pub truncation_index: usize,
    pub partial_sum: f64,
    /// First omitted term, when it was computed.
    pub first_omitted: Option<f64>,
    /// `|first omitted term|`; zero when the series terminated.
    pub remainder_bound: f64,
    /// Set when summation stopped because a term grew in magnitude.
    pub diverged: bool,
}

/// Largest `r_max` usable with generators built from the Bernoulli table:
/// one extra term is always requested for the remainder.
pub const MAX_SERIES_TERMS: usize = MAX_BERNOULLI_INDEX / 2 - 1;

/// Sums `a_1, a_2, ...` and stops before the first term whose magnitude exceeds
/// the previous nonzero one, or after `r_max` terms.
///
/// The generator is called at most `r_max + 1` times.
pub fn asymptotic_eval(term: impl Fn(usize) -> f64, r_max: usize) -> Result<AsymptoticSeries> {
    if r_max == 0 {
        return Err(Error::domain("r_max must be at least 1"));
    }
    let mut terms = Vec::with_capacity(r_max);
    let mut reference: Option<f64> = None;
    let mut sum = 0.0;
    for n in 1..=r_max {
        let a = term(n);
        if let Some(prev) = reference {
            if a.abs() > prev {
                return Ok(AsymptoticSeries {
                    truncation_index: terms.len(),
                    terms,
                    partial_sum: sum,
                    first_omitted: Some(a),
                    remainder_bound: a.abs(),
                    diverged: true,
                });
            }
        }
        if a != 0.0 {
            reference = Some(a.abs());
        }
        sum += a;
        terms.push(a);
    }
    let next = term(r_max + 1);
    Ok(AsymptoticSeries {
        truncation_index: r_max,
        terms,
        partial_sum: sum,
        first_omitted: Some(next),
        remainder_bound: next.abs(),
        diverged: false,
    })
}

/// Sums exactly `r` terms with no growth test; the remainder is `|a_{r+1}|`.
pub fn fixed_eval(term: impl Fn(usize) -> f64, r: usize) -> Result<AsymptoticSeries> {
    if r == 0 {
        return Err(Error::domain("expansion order must be at least 1"));
    }
    let terms: Vec<f64> = (1..=r).map(&term).collect();
    let next = term(r + 1);
    Ok(AsymptoticSeries {
        truncation_index: r,
        partial_sum: terms.iter().sum(),
        terms,
        first_omitted: Some(next),
        remainder_bound: next.abs(),
        diverged: false,
    })
}

/// Number of terms retained by an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionOrder {
    /// Stop just before the smallest term.
    #[default]
    Optimal,
    Fixed(usize),
}

impl ExpansionOrder {
    pub fn evaluate(self, term: impl Fn(usize) -> f64) -> Result<AsymptoticSeries> {
        match self {
            ExpansionOrder::Optimal => asymptotic_eval(term, MAX_SERIES_TERMS),
            ExpansionOrder::Fixed(r) if r > MAX_SERIES_TERMS => Err(Error::domain(format!(
                "expansion order {r} exceeds the Bernoulli table limit {MAX_SERIES_TERMS}"
            ))),
            ExpansionOrder::Fixed(r) => fixed_eval(term, r),
        }
    }
}

/// `sum_{p=0}^{n-1} (-1)^p Gamma(p+1/2)/(p! Gamma(1/2))`.
pub fn bethe_inner_sum(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("bethe_inner_sum needs n >= 1"));
    }
    let mut r = 1.0;
    let mut sum = 0.0;
    for p in 0..n {
        if p % 2 == 0 {
            sum += r;
        } else {
            sum -= r;
        }
        let pf = p as f64;
        r *= (pf + 0.5) / (pf + 1.0);
    }
    debug_assert!((r - gamma_half_ratio(n)).abs() <= 1e-12 * r);
    Ok(sum)
}

/// `n`-th Stirling term `b_{2n} / (2n (2n-1) z^{2n})`, with `NaN` past the Bernoulli table.
pub fn stirling_term(n: usize, z: f64) -> f64 {
    match bernoulli_f64(2 * n) {
        Ok(b) => {
            let m = 2 * n;
            b / ((m * (m - 1)) as f64 * z.powi(m as i32))
        }
        Err(_) => f64::NAN,
    }
}
