//! Deterministic quadrature on `[0, inf)`.
//!
//! Three entry points cover the use cases of the crate:
//!
//! * [`integrate_interval`] is a global adaptive Gauss-Kronrod integrator on a
//!   finite interval.
//! * [`integrate_semiinfinite`] either walks unit panels `[n, n+1]` (so that
//!   integrands with jumps at the integers are integrated piece by piece) or
//!   maps `[0, inf)` onto `(0, 1]` and runs the global adaptive integrator.
//! * [`integrate_sawtooth`] evaluates `int_0^inf g(s) psi(s) ds` with `g` the
//!   sawtooth, working on the odd part of `psi` about each panel midpoint.
//!   The caller supplies `psi(c - u) - psi(c + u)` directly, which lets it
//!   avoid the cancellation that plagues large, slowly varying `psi`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerances and limits for the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Maximum number of unit panels (panel mode) or subintervals (adaptive mode).
    pub max_panels: usize,
    /// Panel walks stop once the cutoff envelope at the panel's left edge drops below this.
    pub tail_stop_threshold: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-14,
            max_panels: 2_000_000,
            tail_stop_threshold: 1e-16,
        }
    }
}

impl QuadSpec {
    pub fn new(
        relative_tolerance: f64,
        absolute_tolerance: f64,
        max_panels: usize,
        tail_stop_threshold: f64,
    ) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            absolute_tolerance,
            max_panels,
            tail_stop_threshold,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.relative_tolerance) || !positive(self.absolute_tolerance) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if !positive(self.tail_stop_threshold) {
            return Err(Error::domain("tail_stop_threshold must be positive"));
        }
        if self.max_panels < 64 {
            return Err(Error::domain("max_panels must be at least 64"));
        }
        Ok(())
    }

    pub fn with_relative_tolerance(mut self, rel: f64) -> Self {
        self.relative_tolerance = rel;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.relative_tolerance * value.abs() + self.absolute_tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Output of one 15-point Gauss-Kronrod application.
#[derive(Debug, Clone, Copy)]
pub struct Gk15 {
    pub value: f64,
    /// Truncation error estimate with the usual Kronrod scaling.
    pub error: f64,
    /// Approximation of the integral of `|f|`.
    pub abs_value: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod rule (with embedded 7-point Gauss rule) on `[a, b]`.
#[allow(clippy::needless_range_loop)]
pub fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Gk15 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = fc * WG[3];
    let mut result_kronrod = fc * WGK[7];
    let mut result_abs = result_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        result_gauss += WG[j] * (f1 + f2);
        result_kronrod += WGK[jtw] * (f1 + f2);
        result_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        result_kronrod += WGK[jtwm1] * (f1 + f2);
        result_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_kronrod * half;
    let abs_value = result_abs * half.abs();
    let asc = result_asc * half.abs();
    let mut error = ((result_kronrod - result_gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    Gk15 {
        value,
        error,
        abs_value,
    }
}

/// Neumaier-compensated running sum; the panel walks add up to millions of terms.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Integrates one panel with GK15, bisecting while the local estimate misses `local_tol`.
fn panel_integral<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    rel: f64,
    local_abs: f64,
    depth: u32,
) -> Gk15 {
    let whole = gk15(f, a, b);
    if depth == 0 || whole.error <= (rel * whole.value.abs()).max(local_abs) {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let left = panel_integral(f, a, mid, rel, 0.5 * local_abs, depth - 1);
    let right = panel_integral(f, mid, b, rel, 0.5 * local_abs, depth - 1);
    Gk15 {
        value: left.value + right.value,
        error: left.error + right.error,
        abs_value: left.abs_value + right.abs_value,
    }
}

const MAX_PANEL_DEPTH: u32 = 8;

/// Accumulator shared by the panel walks.
struct PanelWalk {
    sum: CompensatedSum,
    truncation: f64,
    roundoff: f64,
    panels: usize,
}

impl PanelWalk {
    fn new() -> Self {
        Self {
            sum: CompensatedSum::default(),
            truncation: 0.0,
            roundoff: 0.0,
            panels: 0,
        }
    }

    /// Evaluating a cutoff `phi = e^{-a}` loses about `a` ulps, so each panel's
    /// rounding is weighted by `1 + |ln envelope|` and added linearly.
    fn push(&mut self, panel: Gk15, envelope: f64) {
        self.sum.add(panel.value);
        self.truncation += panel.error;
        let conditioning = if envelope > 0.0 && envelope.is_finite() {
            1.0 + envelope.ln().abs()
        } else {
            1.0
        };
        self.roundoff += panel.abs_value * conditioning;
        self.panels += 1;
    }

    fn error(&self, tail: f64) -> f64 {
        self.truncation + 2.0 * f64::EPSILON * self.roundoff + tail
    }

    fn finish(self, spec: &QuadSpec, tail: f64) -> Result<QuadResult> {
        let value = self.sum.value();
        let error_estimate = self.error(tail);
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                reason: "integrand produced a non-finite value".into(),
                partial: value,
                error_estimate,
            });
        }
        if error_estimate > spec.target(value) {
            return Err(Error::NonConvergence {
                reason: "error estimate exceeds the requested tolerance".into(),
                partial: value,
                error_estimate,
            });
        }
        Ok(QuadResult {
            value,
            error_estimate,
            panels_used: self.panels,
        })
    }

    fn exhausted(&self) -> Error {
        Error::NonConvergence {
            reason: "max_panels exceeded before the tail criterion triggered".into(),
            partial: self.sum.value(),
            error_estimate: self.error(0.0),
        }
    }
}

/// Generic unit-panel walk: `panel(n)` integrates `[n, n+1]` and reports the
/// tail envelope at its left edge alongside the panel result.
///
/// Once the envelope is below the threshold, the remaining tail is estimated
/// from the decay ratio `q` of consecutive panel masses as `mass * q / (1 - q)`;
/// the walk stops when that estimate is negligible against the tolerance.
fn walk_panels(spec: &QuadSpec, mut panel: impl FnMut(usize) -> (Gk15, f64)) -> Result<QuadResult> {
    spec.validate()?;
    let mut walk = PanelWalk::new();
    let mut previous_mass = f64::INFINITY;
    for n in 0..spec.max_panels {
        let (p, env) = panel(n);
        walk.push(p, env);
        let mass = p.abs_value;
        if env < spec.tail_stop_threshold {
            let q = if previous_mass > 0.0 {
                mass / previous_mass
            } else {
                0.0
            };
            if q < 1.0 {
                let tail = if mass == 0.0 {
                    0.0
                } else {
                    mass * q / (1.0 - q)
                };
                if tail <= 1e-3 * spec.target(walk.sum.value()) {
                    return walk.finish(spec, tail);
                }
            }
        }
        previous_mass = mass;
    }
    Err(walk.exhausted())
}

/// Global adaptive Gauss-Kronrod integration on the finite interval `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            panels_used: 0,
        });
    }

    #[derive(Clone, Copy)]
    struct Piece {
        a: f64,
        b: f64,
        r: Gk15,
    }
    impl PartialEq for Piece {
        fn eq(&self, other: &Self) -> bool {
            self.cmp(other) == Ordering::Equal
        }
    }
    impl Eq for Piece {}
    impl PartialOrd for Piece {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Piece {
        fn cmp(&self, other: &Self) -> Ordering {
            self.r
                .error
                .total_cmp(&other.r.error)
                .then(other.a.total_cmp(&self.a))
        }
    }

    let first = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, r: first });
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_total = first.abs_value;
    let mut pieces = 1usize;
    let round = |abs_total: f64| 50.0 * f64::EPSILON * abs_total;
    while error > spec.target(value).max(round(abs_total)) {
        if pieces >= spec.max_panels {
            return Err(Error::NonConvergence {
                reason: "adaptive subdivision limit reached".into(),
                partial: value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.r.value;
        error += left.error + right.error - worst.r.error;
        abs_total += left.abs_value + right.abs_value - worst.r.abs_value;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            r: left,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            r: right,
        });
        pieces += 1;
    }
    // Re-sum from the leaves in a fixed order to shed accumulated drift.
    let mut leaves: Vec<Piece> = heap.into_vec();
    leaves.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut sum = CompensatedSum::default();
    let mut err = 0.0;
    for p in &leaves {
        sum.add(p.r.value);
        err += p.r.error;
    }
    let value = sum.value();
    let error_estimate = err.max(round(abs_total));
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            reason: "integrand produced a non-finite value".into(),
            partial: value,
            error_estimate,
        });
    }
    Ok(QuadResult {
        value,
        error_estimate,
        panels_used: leaves.len(),
    })
}

/// Integrates `f` over `[0, inf)`.
///
/// With `breakpoints_at_integers` the integral is assembled from unit panels,
/// each handled by GK15 with bounded bisection, until a panel's integral of
/// `|f|` is negligible both absolutely (below `tail_stop_threshold`) and
/// against the requested tolerance. Without it the substitution
/// `t = (1 - x) / x` maps the half line onto `(0, 1]` for global adaptive
/// integration.
pub fn integrate_semiinfinite<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    breakpoints_at_integers: bool,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if breakpoints_at_integers {
        // Without an explicit envelope, the panel's own mass acts as one.
        let local_abs = spec.absolute_tolerance / 64.0;
        walk_panels(spec, |n| {
            let a = n as f64;
            let p = panel_integral(
                f,
                a,
                a + 1.0,
                spec.relative_tolerance,
                local_abs,
                MAX_PANEL_DEPTH,
            );
            (p, p.abs_value)
        })
    } else {
        let mapped = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let t = (1.0 - x) / x;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v / (x * x)
            }
        };
        integrate_interval(&mapped, 0.0, 1.0, spec)
    }
}

/// Unit-panel integration of `f` over `[0, inf)` with the tail criterion keyed to
/// `envelope`, normally the cutoff profile evaluated at the panel's left edge.
pub fn integrate_semiinfinite_with_envelope<F, E>(
    f: &F,
    envelope: E,
    spec: &QuadSpec,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + ?Sized,
    E: Fn(f64) -> f64,
{
    let local_abs = spec.absolute_tolerance / 64.0;
    walk_panels(spec, |n| {
        let a = n as f64;
        let p = panel_integral(
            f,
            a,
            a + 1.0,
            spec.relative_tolerance,
            local_abs,
            MAX_PANEL_DEPTH,
        );
        (p, envelope(a))
    })
}

/// `int_0^inf g(s) psi(s) ds` where `g(s) = pi (1/2 - frac s)` is the sawtooth.
///
/// On the panel `[n, n+1]` with midpoint `c` the sawtooth is `-pi (s - c)`, so
/// the panel integral equals `pi int_0^{1/2} u [psi(c-u) - psi(c+u)] du`.
/// `odd_part(c, u)` must return `psi(c - u) - psi(c + u)`; `envelope(s)` is the
/// cutoff factor used by the tail criterion.
pub fn integrate_sawtooth<D, E>(odd_part: D, envelope: E, spec: &QuadSpec) -> Result<QuadResult>
where
    D: Fn(f64, f64) -> f64,
    E: Fn(f64) -> f64,
{
    let local_abs = spec.absolute_tolerance / 64.0;
    walk_panels(spec, |n| {
        let c = n as f64 + 0.5;
        let integrand = |u: f64| PI * u * odd_part(c, u);
        let p = panel_integral(
            &integrand,
            0.0,
            0.5,
            spec.relative_tolerance,
            local_abs,
            MAX_PANEL_DEPTH,
        );
        (p, envelope(n as f64))
    })
}
