//! Zero-point energy between two plates.
//!
//! Every plate quantity here is a functional of the form
//!
//! ```text
//! H = V kd^(gamma+2) / pi^3 * A kd^(-beta) * int_0^inf g(s) (s+xi)^(-beta) (s^2+eta^2)^(gamma/2) phi(kd s_eta / kphi) ds
//! ```
//!
//! with `g` the sawtooth, `s_eta = sqrt(s^2 + eta^2)` and `phi` the cutoff
//! profile. The integral is computed two ways: by panel quadrature on the
//! sawtooth (`h_casimir_quadrature`) and by the Bernoulli expansion
//! `int g F = pi sum_n b_2n / (2n (2n-1)) F_{2n-2}` in the Taylor
//! coefficients `F_k` of `F` at zero (`h_casimir_expansion`).

use std::f64::consts::PI;

use crate::emsum::{AsymptoticSeries, ExpansionOrder, MAX_SERIES_TERMS};
use crate::error::{Error, Result};
use crate::quad::{integrate_sawtooth, QuadResult, QuadSpec};
use crate::regseries::g_closed;
use crate::special::bernoulli_f64;

/// Shape of the ultraviolet regulator `phi`, normalized to `phi(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutoffFamily {
    /// `e^{-x^2}`
    Gaussian,
    /// `e^{-x^4}`
    Quartic,
    /// `2 / (e^x + e^{-x})`
    Sech,
}

impl CutoffFamily {
    pub const ALL: [CutoffFamily; 3] = [
        CutoffFamily::Gaussian,
        CutoffFamily::Quartic,
        CutoffFamily::Sech,
    ];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            CutoffFamily::Gaussian => (-x * x).exp(),
            CutoffFamily::Quartic => (-(x * x) * (x * x)).exp(),
            CutoffFamily::Sech => {
                let ax = x.abs();
                if ax > 700.0 {
                    0.0
                } else {
                    1.0 / ax.cosh()
                }
            }
        }
    }

    /// `int_0^inf x^3 phi(x) dx`.
    pub fn third_moment(self) -> f64 {
        match self {
            CutoffFamily::Gaussian => 0.5,
            CutoffFamily::Quartic => 0.25,
            // 2 * 3! * beta(4), Dirichlet beta at 4.
            CutoffFamily::Sech => 12.0 * 0.988_944_551_741_105_336_1,
        }
    }

    /// `(phi(sqrt X) + phi(sqrt(X+D))) / 2` and `phi(sqrt X) - phi(sqrt(X+D))`,
    /// the difference evaluated without cancellation.
    fn mean_diff(self, x: f64, d: f64) -> (f64, f64) {
        match self {
            CutoffFamily::Gaussian => {
                let base = (-x).exp();
                (0.5 * base * (1.0 + (-d).exp()), -base * (-d).exp_m1())
            }
            CutoffFamily::Quartic => {
                let base = (-x * x).exp();
                let dd = d * (2.0 * x + d);
                (0.5 * base * (1.0 + (-dd).exp()), -base * (-dd).exp_m1())
            }
            CutoffFamily::Sech => {
                let lo = x.sqrt();
                let hi = (x + d).sqrt();
                if lo > 700.0 {
                    return (0.0, 0.0);
                }
                let (clo, chi) = (lo.cosh(), hi.cosh());
                let gap = if d == 0.0 { 0.0 } else { d / (hi + lo) };
                let diff = 2.0 * (0.5 * (hi + lo)).sinh() * (0.5 * gap).sinh() / (clo * chi);
                (0.5 * (1.0 / clo + 1.0 / chi), diff)
            }
        }
    }
}

impl std::fmt::Display for CutoffFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CutoffFamily::Gaussian => "gaussian",
            CutoffFamily::Quartic => "quartic",
            CutoffFamily::Sech => "sech",
        })
    }
}

impl std::str::FromStr for CutoffFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(CutoffFamily::Gaussian),
            "quartic" => Ok(CutoffFamily::Quartic),
            "sech" => Ok(CutoffFamily::Sech),
            other => Err(Error::domain(format!("unknown cutoff family '{other}'"))),
        }
    }
}

/// A cutoff family at a definite ultraviolet scale `kappa_phi` (inverse nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    family: CutoffFamily,
    kappa_phi: f64,
}

impl CutoffProfile {
    pub fn new(family: CutoffFamily, kappa_phi: f64) -> Result<Self> {
        if !(kappa_phi.is_finite() && kappa_phi > 0.0) {
            return Err(Error::domain("kappa_phi must be positive and finite"));
        }
        Ok(Self { family, kappa_phi })
    }

    /// Profile whose scale is `ratio` times the plate scale of `geom`.
    pub fn relative_to(family: CutoffFamily, geom: &PlateGeometry, ratio: f64) -> Result<Self> {
        Self::new(family, ratio * geom.kappa_d())
    }

    pub fn family(&self) -> CutoffFamily {
        self.family
    }

    pub fn kappa_phi(&self) -> f64 {
        self.kappa_phi
    }

    /// `phi(k / kappa_phi)`.
    pub fn eval(&self, k: f64) -> f64 {
        self.family.eval(k / self.kappa_phi)
    }
}

/// Two square plates of side `L` at distance `d` (both in nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateGeometry {
    plate_size: f64,
    separation: f64,
}

impl PlateGeometry {
    pub fn new(plate_size: f64, separation: f64) -> Result<Self> {
        if !(plate_size.is_finite() && plate_size > 0.0) {
            return Err(Error::domain("plate size L must be positive and finite"));
        }
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::domain("separation d must be positive and finite"));
        }
        Ok(Self {
            plate_size,
            separation,
        })
    }

    pub fn plate_size(&self) -> f64 {
        self.plate_size
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Lowest transverse mode energy `pi / d`.
    pub fn kappa_d(&self) -> f64 {
        PI / self.separation
    }

    pub fn volume(&self) -> f64 {
        self.plate_size * self.plate_size * self.separation
    }

    /// The plate model assumes `d << L`; flagged when `d / L > 0.1`.
    pub fn plates_too_close_to_size(&self) -> bool {
        self.separation / self.plate_size > 0.1
    }
}

/// Parameters of the weight `A / (kd^beta (s+xi)^beta) * (s^2+eta^2)^(gamma/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWeight {
    pub amplitude: f64,
    pub beta: f64,
    pub gamma: i32,
    pub xi_star: f64,
    pub eta_star: f64,
}

impl SpectralWeight {
    pub fn new(amplitude: f64, beta: f64, gamma: i32, xi_star: f64, eta_star: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::domain("amplitude must be finite"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain("beta must be finite and nonnegative"));
        }
        if !(eta_star.is_finite() && eta_star >= 0.0) {
            return Err(Error::domain("eta_star must be finite and nonnegative"));
        }
        if !(xi_star.is_finite() && xi_star >= eta_star) {
            return Err(Error::domain(
                "xi_star must be finite and at least eta_star",
            ));
        }
        if beta > 0.0 && xi_star == 0.0 {
            return Err(Error::domain("beta > 0 needs xi_star > 0"));
        }
        if gamma <= -1 && eta_star == 0.0 {
            return Err(Error::domain(
                "gamma <= -1 needs eta_star > 0: the eta -> 0 limit does not exist",
            ));
        }
        Ok(Self {
            amplitude,
            beta,
            gamma,
            xi_star,
            eta_star,
        })
    }

    /// The plain zero-point weight: `k^2 / 2` in units of the plate scale.
    pub fn casimir() -> Self {
        Self {
            amplitude: 0.5,
            beta: 0.0,
            gamma: 2,
            xi_star: 0.0,
            eta_star: 0.0,
        }
    }

    /// Fluctuation-picture Lamb weight `1 / (s^2 + eta^2)`.
    pub fn welton(eta_star: f64) -> Result<Self> {
        Self::new(1.0, 0.0, -2, eta_star, eta_star)
    }

    /// Perturbative Lamb weight `1 / ((s + eta) sqrt(s^2 + eta^2))`.
    pub fn bethe(eta_star: f64) -> Result<Self> {
        Self::new(1.0, 1.0, -1, eta_star, eta_star)
    }

    /// Taylor coefficients at `s = 0` of `(s+xi)^(-beta) (s^2+eta^2)^(gamma/2)`, indices `0..len`.
    pub fn taylor_coefficients(&self, len: usize) -> Result<Vec<f64>> {
        let left = inverse_power_series(self.xi_star, self.beta, len);
        let right = even_power_series(self.eta_star, self.gamma, len)?;
        Ok(cauchy_product(&left, &right, len))
    }

    /// `(s+xi)^(-beta) (s^2+eta^2)^(gamma/2)` at `s`, without the amplitude.
    pub fn shape(&self, s: f64) -> f64 {
        let left = if self.beta == 0.0 {
            1.0
        } else {
            (s + self.xi_star).powf(-self.beta)
        };
        let right = if self.gamma == 0 {
            1.0
        } else {
            (s * s + self.eta_star * self.eta_star).powf(0.5 * self.gamma as f64)
        };
        left * right
    }
}

/// Coefficients of `(s + xi)^(-beta)`.
fn inverse_power_series(xi: f64, beta: f64, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    if len == 0 {
        return c;
    }
    if beta == 0.0 {
        c[0] = 1.0;
        return c;
    }
    c[0] = xi.powf(-beta);
    for m in 0..len - 1 {
        let mf = m as f64;
        c[m + 1] = c[m] * (-(beta + mf) / ((mf + 1.0) * xi));
    }
    c
}

/// Coefficients of `(s^2 + eta^2)^(gamma/2)`.
fn even_power_series(eta: f64, gamma: i32, len: usize) -> Result<Vec<f64>> {
    let mut c = vec![0.0; len];
    if eta == 0.0 {
        if gamma < 0 {
            return Err(Error::domain(
                "(s^2)^(gamma/2) has no Taylor series at 0 for gamma < 0",
            ));
        }
        if (gamma as usize) < len {
            c[gamma as usize] = 1.0;
        }
        return Ok(c);
    }
    // eta^gamma * sum_j C(gamma/2, j) (s/eta)^(2j)
    let half = 0.5 * gamma as f64;
    let inv_eta2 = 1.0 / (eta * eta);
    let mut coeff = eta.powi(gamma);
    let mut j = 0usize;
    while 2 * j < len {
        c[2 * j] = coeff;
        let jf = j as f64;
        coeff *= (half - jf) / (jf + 1.0) * inv_eta2;
        j += 1;
    }
    Ok(c)
}

fn cauchy_product(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
        .collect()
}

/// Coefficients in `s` of `phi(sqrt(s^2 + eta^2) / K)` for the exponential families.
fn profile_series(family: CutoffFamily, eta: f64, k_ratio: f64, len: usize) -> Result<Vec<f64>> {
    let y0 = eta * eta / (k_ratio * k_ratio);
    let inv_k2 = 1.0 / (k_ratio * k_ratio);
    // phi = exp(h(s)) with h a polynomial in s.
    let (h0, h) = match family {
        CutoffFamily::Gaussian => (-y0, vec![(2usize, -inv_k2)]),
        CutoffFamily::Quartic => (
            -y0 * y0,
            vec![(2, -2.0 * y0 * inv_k2), (4, -inv_k2 * inv_k2)],
        ),
        CutoffFamily::Sech => {
            return Err(Error::domain(
                "the regulated expansion is available for gaussian and quartic profiles only",
            ))
        }
    };
    let mut e = vec![0.0; len];
    if len == 0 {
        return Ok(e);
    }
    e[0] = 1.0;
    for k in 1..len {
        let mut acc = 0.0;
        for &(j, hj) in &h {
            if j <= k {
                acc += j as f64 * hj * e[k - j];
            }
        }
        e[k] = acc / k as f64;
    }
    let scale = h0.exp();
    Ok(e.into_iter().map(|x| x * scale).collect())
}

/// `b_2n / (2n (2n-1)) * c_{2n-2}`, the `n`-th term of `(1/pi) int g F`.
fn series_term(coeffs: &[f64], n: usize) -> f64 {
    match (bernoulli_f64(2 * n), coeffs.get(2 * n - 2)) {
        (Ok(b), Some(&c)) => b / ((2 * n * (2 * n - 1)) as f64) * c,
        _ => f64::NAN,
    }
}

fn coefficient_count() -> usize {
    2 * (MAX_SERIES_TERMS + 1)
}

/// Bernoulli expansion of `(1/pi) int_0^inf g(s) F(s) ds` for the weight's shape
/// with the cutoff removed.
pub fn normalized_series(w: &SpectralWeight, order: ExpansionOrder) -> Result<AsymptoticSeries> {
    let coeffs = w.taylor_coefficients(coefficient_count())?;
    order.evaluate(|n| series_term(&coeffs, n))
}

/// As [`normalized_series`] with the Taylor coefficients of the cutoff
/// `phi(s_eta / k_ratio)` folded in.
pub fn regulated_normalized_series(
    w: &SpectralWeight,
    family: CutoffFamily,
    k_ratio: f64,
    order: ExpansionOrder,
) -> Result<AsymptoticSeries> {
    if !(k_ratio.is_finite() && k_ratio > 0.0) {
        return Err(Error::domain("cutoff ratio must be positive and finite"));
    }
    let len = coefficient_count();
    let shape = w.taylor_coefficients(len)?;
    let profile = profile_series(family, w.eta_star, k_ratio, len)?;
    let coeffs = cauchy_product(&shape, &profile, len);
    order.evaluate(|n| series_term(&coeffs, n))
}

/// `(mean, diff)` of `lo^e` and `(lo + delta)^e`, with `diff = lo^e - (lo+delta)^e`.
fn power_mean_diff(lo: f64, delta: f64, e: f64) -> (f64, f64) {
    if e == 0.0 {
        return (1.0, 0.0);
    }
    if lo <= 0.0 {
        let a = if e > 0.0 { 0.0 } else { f64::INFINITY };
        let b = delta.powf(e);
        return (0.5 * (a + b), a - b);
    }
    let l = (delta / lo).ln_1p();
    let m = (e * (2.0 * lo.ln() + l) * 0.5).exp();
    let half = 0.5 * e * l;
    (m * half.cosh(), -2.0 * m * half.sinh())
}

fn combine((m1, d1): (f64, f64), (m2, d2): (f64, f64)) -> (f64, f64) {
    (m1 * m2 + 0.25 * d1 * d2, m1 * d2 + d1 * m2)
}

/// `int_0^inf g(s) F(s) phi(s_eta / k_ratio) ds` for the weight's shape `F`
/// (amplitude not included).
pub fn sawtooth_moment(
    w: &SpectralWeight,
    family: CutoffFamily,
    k_ratio: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if !(k_ratio.is_finite() && k_ratio > 0.0) {
        return Err(Error::domain("cutoff ratio must be positive and finite"));
    }
    let inv_k2 = 1.0 / (k_ratio * k_ratio);
    let eta2 = w.eta_star * w.eta_star;
    let odd_part = |c: f64, u: f64| {
        let lo = c - u;
        let left = power_mean_diff(lo + w.xi_star, 2.0 * u, -w.beta);
        let lo2 = lo * lo + eta2;
        let delta2 = 4.0 * c * u;
        let right = power_mean_diff(lo2, delta2, 0.5 * w.gamma as f64);
        let cutoff = family.mean_diff(lo2 * inv_k2, delta2 * inv_k2);
        combine(combine(left, right), cutoff).1
    };
    let envelope = |s: f64| family.eval((s * s + eta2).sqrt() / k_ratio);
    integrate_sawtooth(odd_part, envelope, spec)
}

/// Cutoff-free limit of [`sawtooth_moment`] by Richardson extrapolation in `1/K^2`
/// over `K = K0, 2 K0, 4 K0` with `K0 = 100 max(eta, 1)`.
pub fn sawtooth_moment_limit(
    w: &SpectralWeight,
    family: CutoffFamily,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let k0 = 100.0 * w.eta_star.max(w.xi_star).max(1.0);
    let q1 = sawtooth_moment(w, family, k0, spec)?;
    let q2 = sawtooth_moment(w, family, 2.0 * k0, spec)?;
    let q4 = sawtooth_moment(w, family, 4.0 * k0, spec)?;
    let r1 = (4.0 * q2.value - q1.value) / 3.0;
    let r2 = (4.0 * q4.value - q2.value) / 3.0;
    let value = (16.0 * r2 - r1) / 15.0;
    // Quadrature errors propagate with the Richardson weights (at most 16/9 + 4/9 + ...).
    let propagated = (q1.error_estimate + q2.error_estimate + q4.error_estimate) * 2.0;
    Ok(QuadResult {
        value,
        error_estimate: (value - r2).abs() + propagated,
        panels_used: q1.panels_used + q2.panels_used + q4.panels_used,
    })
}

/// Quadrature precision used by the energy routes unless the caller supplies one.
///
/// The rounding part of the error estimate is a linear worst case over all
/// panels, so at `kappa_phi / kappa_d = 1e4` it sits near `1e-6` relative while
/// the observed error is one to two orders of magnitude smaller.
pub fn default_casimir_spec() -> QuadSpec {
    QuadSpec {
        relative_tolerance: 1e-5,
        absolute_tolerance: 1e-15,
        ..QuadSpec::default()
    }
}

fn quadrature_prefactor(w: &SpectralWeight, geom: &PlateGeometry) -> f64 {
    let kd = geom.kappa_d();
    geom.volume() * kd.powi(w.gamma + 2) / PI.powi(3) * w.amplitude * kd.powf(-w.beta)
}

/// The plate functional `H` by panel quadrature of the sawtooth integral.
pub fn h_casimir_quadrature(
    w: &SpectralWeight,
    geom: &PlateGeometry,
    profile: &CutoffProfile,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if w.amplitude == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            panels_used: 0,
        });
    }
    let k_ratio = profile.kappa_phi() / geom.kappa_d();
    let r = sawtooth_moment(w, profile.family(), k_ratio, spec)?;
    let p = quadrature_prefactor(w, geom);
    Ok(QuadResult {
        value: p * r.value,
        error_estimate: p.abs() * r.error_estimate,
        panels_used: r.panels_used,
    })
}

/// Cutoff-free plate functional from Richardson-extrapolated quadrature.
pub fn h_casimir_limit(
    w: &SpectralWeight,
    geom: &PlateGeometry,
    family: CutoffFamily,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let r = sawtooth_moment_limit(w, family, spec)?;
    let p = quadrature_prefactor(w, geom);
    Ok(QuadResult {
        value: p * r.value,
        error_estimate: p.abs() * r.error_estimate,
        panels_used: r.panels_used,
    })
}

/// `H` from the Bernoulli expansion, with the normalized series it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct HExpansion {
    pub value: f64,
    /// `|first omitted term|` times the prefactor.
    pub remainder_bound: f64,
    /// `V kd^(gamma+2) / pi^2 * A kd^(-beta)`.
    pub prefactor: f64,
    pub series: AsymptoticSeries,
}

fn expansion_prefactor(w: &SpectralWeight, geom: &PlateGeometry) -> f64 {
    quadrature_prefactor(w, geom) * PI
}

fn wrap_expansion(
    w: &SpectralWeight,
    geom: &PlateGeometry,
    series: AsymptoticSeries,
) -> HExpansion {
    let prefactor = expansion_prefactor(w, geom);
    HExpansion {
        value: prefactor * series.partial_sum,
        remainder_bound: prefactor.abs() * series.remainder_bound,
        prefactor,
        series,
    }
}

/// The plate functional `H` from its Bernoulli expansion at `s = 0`, cutoff removed.
pub fn h_casimir_expansion(
    w: &SpectralWeight,
    geom: &PlateGeometry,
    order: ExpansionOrder,
) -> Result<HExpansion> {
    let series = normalized_series(w, order)?;
    Ok(wrap_expansion(w, geom, series))
}

/// The expansion including the cutoff's own Taylor coefficients, comparable with
/// quadrature at a finite `kappa_phi`.
pub fn h_casimir_expansion_regulated(
    w: &SpectralWeight,
    geom: &PlateGeometry,
    profile: &CutoffProfile,
    order: ExpansionOrder,
) -> Result<HExpansion> {
    let k_ratio = profile.kappa_phi() / geom.kappa_d();
    let series = regulated_normalized_series(w, profile.family(), k_ratio, order)?;
    Ok(wrap_expansion(w, geom, series))
}

/// Free-space photon density of states `k^2 / pi^2`.
pub fn rho_free(k: f64) -> f64 {
    k * k / (PI * PI)
}

/// Plate-induced correction `(kd k / pi^3) g(k / kd)`.
pub fn rho_correction(k: f64, kappa_d: f64) -> Result<f64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::domain("k must be finite and nonnegative"));
    }
    if !(kappa_d.is_finite() && kappa_d > 0.0) {
        return Err(Error::domain("kappa_d must be positive and finite"));
    }
    Ok(kappa_d * k / PI.powi(3) * g_closed(k / kappa_d))
}

/// How [`casimir_energy`] evaluates the plate term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirRoute {
    Quadrature,
    Expansion,
    ClosedForm,
}

/// `-pi^2 L^2 / (720 d^3)`.
pub fn casimir_closed_form(geom: &PlateGeometry) -> f64 {
    let l = geom.plate_size();
    let d = geom.separation();
    -PI * PI / 720.0 * l * l / (d * d * d)
}

/// Plate contribution to the regularized zero-point energy.
pub fn casimir_energy(
    geom: &PlateGeometry,
    profile: &CutoffProfile,
    route: CasimirRoute,
) -> Result<f64> {
    match route {
        CasimirRoute::ClosedForm => Ok(casimir_closed_form(geom)),
        CasimirRoute::Expansion => {
            Ok(
                h_casimir_expansion(&SpectralWeight::casimir(), geom, ExpansionOrder::Optimal)?
                    .value,
            )
        }
        CasimirRoute::Quadrature => Ok(h_casimir_quadrature(
            &SpectralWeight::casimir(),
            geom,
            profile,
            &default_casimir_spec(),
        )?
        .value),
    }
}

/// Regulator-dependent free-space energy density `int_0^inf k^3 / (2 pi^2) phi(k / kphi) dk`.
pub fn bulk_energy_density(profile: &CutoffProfile) -> f64 {
    profile.kappa_phi().powi(4) / (2.0 * PI * PI) * profile.family().third_moment()
}
