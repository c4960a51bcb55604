//! The sawtooth `g(s)`, its Gaussian-damped Fourier series and the erf comb
//! that measures the gap between the two.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{erf, erfc};

/// Distance to the nearest integer below which `s` counts as an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

fn is_integer(s: f64) -> bool {
    (s - s.round()).abs() < INTEGER_TOLERANCE
}

/// Damping and truncation parameters for the regularized series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    epsilon: f64,
    max_terms: usize,
    tail_tolerance: f64,
}

impl RegularizationParams {
    /// Picks the smallest `max_terms` whose termwise bound `e^{-eps p^2}/p` is below `tail_tolerance`.
    pub fn new(epsilon: f64, tail_tolerance: f64) -> Result<Self> {
        Self::check(epsilon, tail_tolerance)?;
        let mut p = ((-tail_tolerance.ln()).max(0.0) / epsilon)
            .sqrt()
            .floor()
            .max(1.0) as usize;
        while p > 1 && Self::bound(epsilon, p - 1) < tail_tolerance {
            p -= 1;
        }
        while Self::bound(epsilon, p) >= tail_tolerance {
            p += 1;
        }
        Ok(Self {
            epsilon,
            max_terms: p,
            tail_tolerance,
        })
    }

    /// Explicit term count; rejected when too small for `tail_tolerance`.
    pub fn with_max_terms(epsilon: f64, max_terms: usize, tail_tolerance: f64) -> Result<Self> {
        Self::check(epsilon, tail_tolerance)?;
        if max_terms == 0 || Self::bound(epsilon, max_terms) >= tail_tolerance {
            return Err(Error::domain(format!(
                "max_terms = {max_terms} leaves a tail above {tail_tolerance:e} at epsilon = {epsilon:e}"
            )));
        }
        Ok(Self {
            epsilon,
            max_terms,
            tail_tolerance,
        })
    }

    /// Default truncation at `1e-17`, below double-precision resolution of the sums.
    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 1e-17)
    }

    fn check(epsilon: f64, tail_tolerance: f64) -> Result<()> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::domain("epsilon must be positive and finite"));
        }
        if !(tail_tolerance.is_finite() && tail_tolerance > 0.0) {
            return Err(Error::domain("tail_tolerance must be positive and finite"));
        }
        Ok(())
    }

    fn bound(epsilon: f64, p: usize) -> f64 {
        let p = p as f64;
        (-epsilon * p * p).exp() / p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }
}

/// The sawtooth `pi (1/2 - frac s)`, exactly zero at the integers.
pub fn g_closed(s: f64) -> f64 {
    if is_integer(s) {
        return 0.0;
    }
    PI * (0.5 - (s - s.floor()))
}

/// `sum_{p=1}^{max_terms} sin(2 pi p s) / p * e^{-eps p^2}`.
pub fn g_regularized(s: f64, params: &RegularizationParams) -> f64 {
    if is_integer(2.0 * s) {
        // Every term carries sin(pi * integer).
        return 0.0;
    }
    let frac = s - s.floor();
    let eps = params.epsilon;
    let mut sum = 0.0;
    for p in 1..=params.max_terms {
        let pf = p as f64;
        // Reduce p*s modulo 1 before multiplying by 2 pi.
        let phase = (pf * frac).fract();
        sum += (2.0 * PI * phase).sin() / pf * (-eps * pf * pf).exp();
    }
    sum
}

/// The erf comb term for general `s`:
/// `(pi/2) sign(s) [erf(pi(n+|s|)/sqrt eps) - sign(n-|s|) erf(pi|n-|s||/sqrt eps)]`.
pub fn comb_term(n: u64, s: f64, epsilon: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("comb index n must be at least 1"));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::domain("epsilon must be positive and finite"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let root = epsilon.sqrt();
    let a_abs = s.abs();
    let nf = n as f64;
    let a = PI * (nf + a_abs) / root;
    let b = PI * (nf - a_abs).abs() / root;
    // Bracket evaluated through erfc so that tiny differences keep their digits.
    let bracket = if nf > a_abs {
        erfc(b) - erfc(a)
    } else if nf < a_abs {
        2.0 - erfc(a) - erfc(b)
    } else {
        erf(a)
    };
    Ok(0.5 * PI * s.signum() * bracket)
}

/// `R_1(s) = sum_{n>=1} comb_term(n, s, eps)`, truncated once the terms beyond
/// `|s|` fall below `tail_tolerance`.
pub fn remainder_r1(s: f64, epsilon: f64, tail_tolerance: f64) -> Result<f64> {
    if !(tail_tolerance.is_finite() && tail_tolerance > 0.0) {
        return Err(Error::domain("tail_tolerance must be positive and finite"));
    }
    if !s.is_finite() {
        return Err(Error::domain("s must be finite"));
    }
    let a_abs = s.abs();
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        let term = comb_term(n, s, epsilon)?;
        sum += term;
        let gap = n as f64 - a_abs;
        if gap > 0.0 && PI * (-PI * PI * gap * gap / epsilon).exp() < tail_tolerance {
            break;
        }
        n += 1;
    }
    Ok(sum)
}

/// Residual of `g_eps(s) = (pi/2) erf(pi s / sqrt eps) - pi s + R_1(s)`.
pub fn euler_maclaurin_identity_check(s: f64, epsilon: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&s) {
        return Err(Error::domain("identity check requires s in [0, 1/2]"));
    }
    if s == 0.0 {
        RegularizationParams::with_epsilon(epsilon)?;
        return Ok(0.0);
    }
    let params = RegularizationParams::with_epsilon(epsilon)?;
    let lhs = g_regularized(s, &params);
    let integral = 0.5 * PI * erf(PI * s / epsilon.sqrt());
    let r1 = remainder_r1(s, epsilon, 1e-17)?;
    Ok(lhs - (integral - PI * s + r1))
}
