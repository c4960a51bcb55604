//! Run configuration: defaults, `key = value` files, and flag overrides.
//!
//! Every field has a default. A config file may set any field by its snake-case
//! name; flags are applied afterwards as the same key/value pairs, so both
//! paths share one parser.

use std::fmt;
use std::path::{Path, PathBuf};

use casimir_lamb::casimir::CutoffFamily;
use casimir_lamb::emsum::ExpansionOrder;
use casimir_lamb::lamb::{Carrier, Material};

use crate::error::CliError;

/// Nanometres per micrometre, applied to lengths written with a `um` suffix.
const NM_PER_UM: f64 = 1000.0;

/// A list of sample points together with the text it was parsed from.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    /// Parses `start:stop:step` (inclusive), a comma list, or a single value.
    /// `length` enables the `um` suffix on each number.
    pub fn parse(text: &str, length: bool) -> Result<Self, CliError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(CliError::usage("empty grid"));
        }
        let number = |s: &str| {
            if length {
                parse_length(s)
            } else {
                parse_f64(s)
            }
        };
        let values = if trimmed.contains(':') {
            let parts: Vec<&str> = trimmed.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::usage(format!(
                    "grid '{trimmed}' must be start:stop:step"
                )));
            }
            let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(CliError::usage(format!(
                    "grid '{trimmed}' needs a positive step and stop >= start"
                )));
            }
            let span = (stop - start) / step;
            if span > 1e7 {
                return Err(CliError::usage(format!(
                    "grid '{trimmed}' has too many points"
                )));
            }
            // The small slack keeps the endpoint when (stop - start) / step rounds just below an integer.
            let count = (span + 1e-9).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        } else {
            trimmed
                .split(',')
                .map(number)
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Self {
            text: trimmed.to_string(),
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn parse_f64(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::usage(format!("'{s}' is not a finite number"))),
    }
}

/// Length in nm; a trailing `um` multiplies by 1000 and an explicit `nm` is accepted.
pub fn parse_length(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    if let Some(v) = s.strip_suffix("um") {
        Ok(parse_f64(v)? * NM_PER_UM)
    } else if let Some(v) = s.strip_suffix("nm") {
        parse_f64(v)
    } else {
        parse_f64(s)
    }
}

fn parse_positive(s: &str, length: bool) -> Result<f64, CliError> {
    let v = if length {
        parse_length(s)?
    } else {
        parse_f64(s)?
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::usage(format!("'{}' must be positive", s.trim())))
    }
}

/// Cutoff families requested for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Profiles(pub Vec<CutoffFamily>);

impl Profiles {
    fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(Self(CutoffFamily::ALL.to_vec()));
        }
        let mut out = Vec::new();
        for part in s.split(',') {
            let fam: CutoffFamily = part
                .parse()
                .map_err(|e: casimir_lamb::Error| CliError::usage(e.to_string()))?;
            if !out.contains(&fam) {
                out.push(fam);
            }
        }
        Ok(Self(out))
    }
}

impl fmt::Display for Profiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&names.join(","))
    }
}

fn parse_order(s: &str) -> Result<ExpansionOrder, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("optimal") {
        return Ok(ExpansionOrder::Optimal);
    }
    match s.parse::<usize>() {
        Ok(r) if r >= 1 => Ok(ExpansionOrder::Fixed(r)),
        _ => Err(CliError::usage(format!(
            "order '{s}' must be 'optimal' or a positive integer"
        ))),
    }
}

fn order_text(o: ExpansionOrder) -> String {
    match o {
        ExpansionOrder::Optimal => "optimal".to_string(),
        ExpansionOrder::Fixed(r) => r.to_string(),
    }
}

fn fmt_opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Shortest round-trip text, switching to exponent form for very small or large magnitudes.
fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-3..1e6).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// All run parameters. Lengths are in nm, wavenumbers in nm^-1.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Built-in material name, `InAs` by default. Ignored when both mass ratios are given inline.
    pub material: String,
    pub electron_mass: Option<f64>,
    pub hole_mass: Option<f64>,
    /// `electron` by default.
    pub carrier: Carrier,
    /// Plate size `L`, 1 nm by default.
    pub plate_size: f64,
    /// Plate separation `d`, 1 nm by default.
    pub separation: f64,
    pub separation_grid: Option<Grid>,
    /// Dot radius `R`, 1.5 nm by default.
    pub radius: f64,
    pub radius_grid: Option<Grid>,
    /// `gaussian` by default; `all` or a comma list is accepted.
    pub profile: Profiles,
    /// `kappa_phi / kappa_d`, 1000 by default.
    pub kratio: f64,
    /// `optimal` by default.
    pub order: ExpansionOrder,
    /// Quadrature tolerances, `1e-5` relative and `1e-15` absolute by default.
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest accepted relative spread between routes, `1e-3` by default.
    pub spread_tol: f64,
    /// Sample points for `gfunc`; no default.
    pub s_grid: Option<Grid>,
    /// Damping parameters for `gfunc`, `1e-3` by default.
    pub eps: Grid,
    /// `eta* = kappa*/kappa_d`, 10 by default.
    pub eta: f64,
    /// `xi*`; equal to `eta` when unset.
    pub xi: Option<f64>,
    /// Spectral weight shape for `hcasimir`, `(1, 0, -2)` (fluctuation picture) by default.
    pub amplitude: f64,
    pub beta: f64,
    pub gamma: i32,
    /// `ln(m*/kappa*)`, 1 by default.
    pub log_ratio: f64,
    /// Euler-Maclaurin order for `em-check`, 3 by default.
    pub em_order: usize,
    /// Stirling argument for `em-check`, 10 by default.
    pub z: f64,
    /// Output file; standard output when unset.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            material: "InAs".to_string(),
            electron_mass: None,
            hole_mass: None,
            carrier: Carrier::Electron,
            plate_size: 1.0,
            separation: 1.0,
            separation_grid: None,
            radius: 1.5,
            radius_grid: None,
            profile: Profiles(vec![CutoffFamily::Gaussian]),
            kratio: 1000.0,
            order: ExpansionOrder::Optimal,
            rel_tol: 1e-5,
            abs_tol: 1e-15,
            spread_tol: 1e-3,
            s_grid: None,
            eps: Grid {
                text: "1e-3".to_string(),
                values: vec![1e-3],
            },
            eta: 10.0,
            xi: None,
            amplitude: 1.0,
            beta: 0.0,
            gamma: -2,
            log_ratio: 1.0,
            em_order: 3,
            z: 10.0,
            output: None,
        }
    }
}

impl RunConfig {
    pub const KEYS: [&'static str; 26] = [
        "material",
        "electron_mass",
        "hole_mass",
        "carrier",
        "plate_size",
        "separation",
        "separation_grid",
        "radius",
        "radius_grid",
        "profile",
        "kratio",
        "order",
        "rel_tol",
        "abs_tol",
        "spread_tol",
        "s_grid",
        "eps",
        "eta",
        "xi",
        "amplitude",
        "beta",
        "gamma",
        "log_ratio",
        "em_order",
        "z",
        "output",
    ];

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "material" => self.material = v.to_string(),
            "electron_mass" => self.electron_mass = Some(parse_positive(v, false)?),
            "hole_mass" => self.hole_mass = Some(parse_positive(v, false)?),
            "carrier" => {
                self.carrier = v
                    .parse()
                    .map_err(|e: casimir_lamb::Error| CliError::usage(e.to_string()))?
            }
            "plate_size" => self.plate_size = parse_positive(v, true)?,
            "separation" => self.separation = parse_positive(v, true)?,
            "separation_grid" => self.separation_grid = Some(Grid::parse(v, true)?),
            "radius" => self.radius = parse_positive(v, true)?,
            "radius_grid" => self.radius_grid = Some(Grid::parse(v, true)?),
            "profile" => self.profile = Profiles::parse(v)?,
            "kratio" => self.kratio = parse_positive(v, false)?,
            "order" => self.order = parse_order(v)?,
            "rel_tol" => self.rel_tol = parse_positive(v, false)?,
            "abs_tol" => self.abs_tol = parse_positive(v, false)?,
            "spread_tol" => self.spread_tol = parse_positive(v, false)?,
            "s_grid" => self.s_grid = Some(Grid::parse(v, false)?),
            "eps" => {
                let g = Grid::parse(v, false)?;
                if g.values.iter().any(|&e| e.is_nan() || e <= 0.0) {
                    return Err(CliError::usage("every eps value must be positive"));
                }
                self.eps = g;
            }
            "eta" => self.eta = parse_f64(v)?,
            "xi" => self.xi = Some(parse_f64(v)?),
            "amplitude" => self.amplitude = parse_f64(v)?,
            "beta" => self.beta = parse_f64(v)?,
            "gamma" => {
                self.gamma = v
                    .parse()
                    .map_err(|_| CliError::usage(format!("gamma '{v}' must be an integer")))?
            }
            "log_ratio" => self.log_ratio = parse_positive(v, false)?,
            "em_order" => {
                self.em_order = v.parse().map_err(|_| {
                    CliError::usage(format!("em_order '{v}' must be a non-negative integer"))
                })?
            }
            "z" => self.z = parse_positive(v, false)?,
            "output" => self.output = Some(PathBuf::from(v)),
            other => return Err(CliError::usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected 'key = value'",
                    path.display(),
                    lineno + 1
                )));
            };
            self.set(key.trim(), value)
                .map_err(|e| CliError::usage(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
        Ok(())
    }

    /// Current value of every field, as written back into a config file.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        Self::KEYS
            .iter()
            .map(|&k| {
                let v = match k {
                    "material" => self.material.clone(),
                    "electron_mass" => self.electron_mass.map(fmt_f64).unwrap_or_default(),
                    "hole_mass" => self.hole_mass.map(fmt_f64).unwrap_or_default(),
                    "carrier" => self.carrier.to_string(),
                    "plate_size" => fmt_f64(self.plate_size),
                    "separation" => fmt_f64(self.separation),
                    "separation_grid" => fmt_opt(&self.separation_grid),
                    "radius" => fmt_f64(self.radius),
                    "radius_grid" => fmt_opt(&self.radius_grid),
                    "profile" => self.profile.to_string(),
                    "kratio" => fmt_f64(self.kratio),
                    "order" => order_text(self.order),
                    "rel_tol" => fmt_f64(self.rel_tol),
                    "abs_tol" => fmt_f64(self.abs_tol),
                    "spread_tol" => fmt_f64(self.spread_tol),
                    "s_grid" => fmt_opt(&self.s_grid),
                    "eps" => self.eps.to_string(),
                    "eta" => fmt_f64(self.eta),
                    "xi" => self.xi.map(fmt_f64).unwrap_or_default(),
                    "amplitude" => fmt_f64(self.amplitude),
                    "beta" => fmt_f64(self.beta),
                    "gamma" => self.gamma.to_string(),
                    "log_ratio" => self.log_ratio.to_string(),
                    "em_order" => self.em_order.to_string(),
                    "z" => fmt_f64(self.z),
                    "output" => self
                        .output
                        .as_ref()
                        .map(|p| p.display().to_string())
                        .unwrap_or_default(),
                    _ => unreachable!("every key is listed"),
                };
                (k, v)
            })
            .collect()
    }

    /// The material to use, honouring inline mass ratios.
    pub fn resolve_material(&self) -> Result<Material, CliError> {
        match (self.electron_mass, self.hole_mass) {
            (Some(e), Some(h)) => Ok(Material::new(self.material.clone(), e, h)?),
            (e, h) => {
                let base = Material::builtin(&self.material).ok_or_else(|| {
                    CliError::usage(format!(
                        "unknown material '{}' (built-in: InAs, InAs-lh; or give both electron_mass and hole_mass)",
                        self.material
                    ))
                })?;
                Ok(Material::new(
                    base.name,
                    e.unwrap_or(base.electron_mass_ratio),
                    h.unwrap_or(base.hole_mass_ratio),
                )?)
            }
        }
    }
}
