//! Relative Lamb-shift corrections between plates and their quantum-dot specialization.
//!
//! All scales are in natural units with lengths in nm and energies in nm^-1.

use std::f64::consts::PI;

use crate::emsum::{bethe_inner_sum, AsymptoticSeries, ExpansionOrder};
use crate::error::{Error, Result};
use crate::special::bernoulli_f64;

/// Reduced Compton wavelength of the electron, in nm.
pub const ELECTRON_REDUCED_COMPTON_NM: f64 = 3.861_592_679_6e-4;

/// Validity bound on `R^2 / (R* d)`: `sqrt(7/3) / 2`.
pub fn validity_bound() -> f64 {
    0.5 * (7.0f64 / 3.0).sqrt()
}

/// The three scales of a Lamb-shift calculation between plates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambContext {
    kappa_d: f64,
    kappa_star: f64,
    m_star: f64,
}

impl LambContext {
    pub fn new(kappa_d: f64, kappa_star: f64, m_star: f64) -> Result<Self> {
        for (name, v) in [
            ("kappa_d", kappa_d),
            ("kappa_star", kappa_star),
            ("m_star", m_star),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive and finite")));
            }
        }
        let eta_star = kappa_star / kappa_d;
        if eta_star <= 1.0 {
            return Err(Error::WeakCoupling { eta_star });
        }
        if m_star <= kappa_star {
            return Err(Error::domain("m_star must exceed kappa_star"));
        }
        Ok(Self {
            kappa_d,
            kappa_star,
            m_star,
        })
    }

    /// Context with `kappa_d = 1`, `kappa* = eta*` and `ln(m*/kappa*) = log_factor`.
    pub fn from_ratios(eta_star: f64, log_factor: f64) -> Result<Self> {
        if !(log_factor.is_finite() && log_factor > 0.0) {
            return Err(Error::domain("log factor must be positive and finite"));
        }
        if !eta_star.is_finite() || eta_star <= 1.0 {
            return Err(Error::WeakCoupling { eta_star });
        }
        Self::new(1.0, eta_star, eta_star * log_factor.exp())
    }

    pub fn kappa_d(&self) -> f64 {
        self.kappa_d
    }

    pub fn kappa_star(&self) -> f64 {
        self.kappa_star
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    pub fn eta_star(&self) -> f64 {
        self.kappa_star / self.kappa_d
    }

    pub fn log_factor(&self) -> f64 {
        (self.m_star / self.kappa_star).ln()
    }

    /// The non-relativistic assumption is shaky when `m*/kappa* < 10`.
    pub fn weak_hierarchy(&self) -> bool {
        self.m_star / self.kappa_star < 10.0
    }

    fn inv_eta2(&self) -> f64 {
        let r = self.kappa_d / self.kappa_star;
        r * r
    }
}

/// A relative shift together with the series behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeShift {
    pub value: f64,
    /// Error bound on `value` (first omitted term over the log factor).
    pub remainder_bound: f64,
    /// Series for `value * log_factor`.
    pub series: AsymptoticSeries,
}

fn shift_from_series(ctx: &LambContext, series: AsymptoticSeries) -> RelativeShift {
    let log = ctx.log_factor();
    RelativeShift {
        value: series.partial_sum / log,
        remainder_bound: series.remainder_bound / log,
        series,
    }
}

fn term_scale(ctx: &LambContext, n: usize) -> f64 {
    ctx.inv_eta2().powi(n as i32)
}

/// `b_2n / (2n (2n-1) eta^2n) * sum_{p<n} (-1)^p Gamma(p+1/2)/(p! Gamma(1/2))`.
pub fn bethe_term(ctx: &LambContext, n: usize) -> f64 {
    let m = 2 * n;
    match (bernoulli_f64(m), bethe_inner_sum(n as u64)) {
        (Ok(b), Ok(inner)) => b / ((m * (m - 1)) as f64) * term_scale(ctx, n) * inner,
        _ => f64::NAN,
    }
}

/// `|b_2n| / (2n (2n-1) eta^2n)`.
pub fn welton_term(ctx: &LambContext, n: usize) -> f64 {
    let m = 2 * n;
    match bernoulli_f64(m) {
        Ok(b) => b.abs() / ((m * (m - 1)) as f64) * term_scale(ctx, n),
        Err(_) => f64::NAN,
    }
}

/// Plate correction to the perturbative (Bethe) Lamb shift, relative to its free-space value.
pub fn bethe_relative_shift(ctx: &LambContext, order: ExpansionOrder) -> Result<RelativeShift> {
    let series = order.evaluate(|n| bethe_term(ctx, n))?;
    Ok(shift_from_series(ctx, series))
}

/// Plate correction in the fluctuation (Welton) picture, relative to its free-space value.
pub fn welton_relative_shift(ctx: &LambContext, order: ExpansionOrder) -> Result<RelativeShift> {
    let series = order.evaluate(|n| welton_term(ctx, n))?;
    Ok(shift_from_series(ctx, series))
}

/// `(1/12) (kappa_d / kappa*)^2 / ln(m*/kappa*)`, common first term of both pictures.
pub fn leading_relative_shift(ctx: &LambContext) -> f64 {
    (1.0 / 12.0) * ctx.inv_eta2() / ctx.log_factor()
}

/// Effective masses of a semiconductor, in units of the electron mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub electron_mass_ratio: f64,
    pub hole_mass_ratio: f64,
    /// Exciton Bohr radius in nm, informational only.
    pub exciton_bohr_radius: Option<f64>,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        electron_mass_ratio: f64,
        hole_mass_ratio: f64,
    ) -> Result<Self> {
        for (label, v) in [("electron", electron_mass_ratio), ("hole", hole_mass_ratio)] {
            if !(v.is_finite() && v > 0.0 && v < 10.0) {
                return Err(Error::domain(format!(
                    "{label} mass ratio {v} must lie in (0, 10)"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            electron_mass_ratio,
            hole_mass_ratio,
            exciton_bohr_radius: None,
        })
    }

    /// InAs with the heavy hole (0.41).
    pub fn inas() -> Self {
        Self::new("InAs", 0.026, 0.41).expect("valid built-in material")
    }

    /// InAs with the light hole (0.026).
    pub fn inas_light_hole() -> Self {
        Self::new("InAs-lh", 0.026, 0.026).expect("valid built-in material")
    }

    /// Built-in materials by name (case-insensitive).
    pub fn builtin(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "inas" => Some(Self::inas()),
            "inas-lh" => Some(Self::inas_light_hole()),
            _ => None,
        }
    }

    pub fn reduced_mass_ratio(&self) -> f64 {
        self.electron_mass_ratio * self.hole_mass_ratio
            / (self.electron_mass_ratio + self.hole_mass_ratio)
    }

    pub fn mass_ratio(&self, carrier: Carrier) -> f64 {
        match carrier {
            Carrier::Electron => self.electron_mass_ratio,
            Carrier::Hole => self.hole_mass_ratio,
            Carrier::Exciton => self.reduced_mass_ratio(),
        }
    }
}

/// Which particle's scales enter the dot calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    Electron,
    Hole,
    /// Uses the reduced mass; a composition convenience rather than a separate model.
    Exciton,
}

impl std::fmt::Display for Carrier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Carrier::Electron => "electron",
            Carrier::Hole => "hole",
            Carrier::Exciton => "exciton",
        })
    }
}

impl std::str::FromStr for Carrier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "electron" | "e" => Ok(Carrier::Electron),
            "hole" | "h" => Ok(Carrier::Hole),
            "exciton" | "x" => Ok(Carrier::Exciton),
            other => Err(Error::domain(format!("unknown carrier '{other}'"))),
        }
    }
}

/// Infrared cutoff, minimal radius and Compton wavelength of a confined carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdCutoffs {
    /// `7 pi^2 / (12 m* R^2)`, nm^-1.
    pub kappa_star: f64,
    /// `(pi/2) sqrt(7/3) lambda*`, nm.
    pub r_star: f64,
    /// `lambda_C / mass_ratio`, nm.
    pub lambda_star: f64,
}

fn single_carrier_kappa(mass_ratio: f64, radius: f64) -> f64 {
    let lambda = ELECTRON_REDUCED_COMPTON_NM / mass_ratio;
    7.0 * PI * PI * lambda / (12.0 * radius * radius)
}

pub fn qd_cutoffs(material: &Material, carrier: Carrier, radius: f64) -> Result<QdCutoffs> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain("radius must be positive and finite"));
    }
    let lambda_star = ELECTRON_REDUCED_COMPTON_NM / material.mass_ratio(carrier);
    let kappa_star = match carrier {
        Carrier::Exciton => {
            single_carrier_kappa(material.electron_mass_ratio, radius)
                + single_carrier_kappa(material.hole_mass_ratio, radius)
        }
        c => single_carrier_kappa(material.mass_ratio(c), radius),
    };
    Ok(QdCutoffs {
        kappa_star,
        r_star: 0.5 * PI * (7.0f64 / 3.0).sqrt() * lambda_star,
        lambda_star,
    })
}

/// A spherical dot of radius `R` between plates at distance `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QDotSystem {
    pub material: Material,
    pub carrier: Carrier,
    pub radius: f64,
    pub separation: f64,
    pub cutoffs: QdCutoffs,
}

impl QDotSystem {
    pub fn new(material: Material, carrier: Carrier, radius: f64, separation: f64) -> Result<Self> {
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::domain("separation must be positive and finite"));
        }
        let cutoffs = qd_cutoffs(&material, carrier, radius)?;
        Ok(Self {
            material,
            carrier,
            radius,
            separation,
            cutoffs,
        })
    }

    /// `R^2 / (R* d)`.
    pub fn validity_ratio(&self) -> f64 {
        self.radius * self.radius / (self.cutoffs.r_star * self.separation)
    }

    pub fn kappa_d(&self) -> f64 {
        PI / self.separation
    }

    pub fn eta_star(&self) -> f64 {
        self.cutoffs.kappa_star / self.kappa_d()
    }

    pub fn m_star(&self) -> f64 {
        1.0 / self.cutoffs.lambda_star
    }

    /// Confinement bound first, then the weak-coupling regime.
    pub fn check(&self) -> Result<()> {
        if self.radius < self.cutoffs.r_star {
            return Err(Error::ConfinementBound {
                radius: self.radius,
                r_star: self.cutoffs.r_star,
            });
        }
        let ratio = self.validity_ratio();
        if ratio >= validity_bound() {
            return Err(Error::OutOfRegime {
                ratio,
                bound: validity_bound(),
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    pub fn lamb_context(&self) -> Result<LambContext> {
        self.check()?;
        LambContext::new(self.kappa_d(), self.cutoffs.kappa_star, self.m_star())
    }
}

/// Evaluation path for [`qd_relative_shift`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdRoute {
    /// `(1/14) (R^2 / (R* d))^2 / ln(R / R*)`.
    ClosedForm,
    /// The generic leading shift with the dot's cutoffs substituted.
    Composed,
}

/// Leading-order relative Lamb-shift modification for a dot between plates.
pub fn qd_relative_shift(sys: &QDotSystem, route: QdRoute) -> Result<f64> {
    sys.check()?;
    match route {
        QdRoute::ClosedForm => {
            let x = sys.validity_ratio();
            Ok(x * x / (14.0 * (sys.radius / sys.cutoffs.r_star).ln()))
        }
        QdRoute::Composed => Ok(leading_relative_shift(&sys.lamb_context()?)),
    }
}

/// One point of a radius or separation sweep; shifts are `None` for invalid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub radius: f64,
    pub separation: f64,
    pub carrier: Carrier,
    pub eta_star: f64,
    pub validity_ratio: f64,
    pub valid: bool,
    pub shift_leading: Option<f64>,
    /// Two-term perturbative expansion.
    pub shift_order2: Option<f64>,
}

fn sweep_row(
    material: &Material,
    carrier: Carrier,
    radius: f64,
    separation: f64,
) -> Result<SweepRow> {
    let sys = QDotSystem::new(material.clone(), carrier, radius, separation)?;
    let (valid, leading, order2) = match sys.lamb_context() {
        Ok(ctx) => (
            true,
            Some(leading_relative_shift(&ctx)),
            Some(bethe_relative_shift(&ctx, ExpansionOrder::Fixed(2))?.value),
        ),
        Err(Error::OutOfRegime { .. })
        | Err(Error::ConfinementBound { .. })
        | Err(Error::WeakCoupling { .. }) => (false, None, None),
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        radius,
        separation,
        carrier,
        eta_star: sys.eta_star(),
        validity_ratio: sys.validity_ratio(),
        valid,
        shift_leading: leading,
        shift_order2: order2,
    })
}

fn check_sorted(grid: &[f64], what: &str) -> Result<()> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain(format!(
            "{what} grid must be sorted ascending"
        )));
    }
    Ok(())
}

/// Shift as a function of the dot radius at fixed separation.
pub fn sweep_radius(
    material: &Material,
    carrier: Carrier,
    separation: f64,
    radii: &[f64],
) -> Result<Vec<SweepRow>> {
    check_sorted(radii, "radius")?;
    radii
        .iter()
        .map(|&r| sweep_row(material, carrier, r, separation))
        .collect()
}

/// Shift as a function of the plate separation at fixed radius.
pub fn sweep_distance(
    material: &Material,
    carrier: Carrier,
    radius: f64,
    separations: &[f64],
) -> Result<Vec<SweepRow>> {
    check_sorted(separations, "separation")?;
    separations
        .iter()
        .map(|&d| sweep_row(material, carrier, radius, d))
        .collect()
}
