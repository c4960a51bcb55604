//! One function per subcommand, each turning a [`RunConfig`] into a table.

use std::f64::consts::FRAC_1_SQRT_2;

use casimir_lamb::casimir::{
    casimir_closed_form, h_casimir_expansion, h_casimir_expansion_regulated, h_casimir_limit,
    h_casimir_quadrature, CutoffFamily, CutoffProfile, PlateGeometry, SpectralWeight,
};
use casimir_lamb::emsum::{bethe_inner_sum, em_sum, fixed_eval, stirling_term, SmoothFunction};
use casimir_lamb::lamb::{
    bethe_relative_shift, bethe_term, leading_relative_shift, qd_cutoffs, sweep_distance,
    sweep_radius, welton_relative_shift, welton_term, LambContext,
};
use casimir_lamb::quad::QuadSpec;
use casimir_lamb::regseries::{g_closed, g_regularized, remainder_r1, RegularizationParams};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{num, opt, Table, HBAR_C_EV_NM};

/// A finished table plus an optional failure that should set the exit code
/// after the table has been written.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self {
            table,
            failure: None,
        }
    }
}

fn quad_spec(cfg: &RunConfig) -> Result<QuadSpec, CliError> {
    let spec = QuadSpec {
        relative_tolerance: cfg.rel_tol,
        absolute_tolerance: cfg.abs_tol,
        ..QuadSpec::default()
    };
    spec.validate()?;
    Ok(spec)
}

fn warn_low_kratio(kratio: f64) {
    if kratio < 10.0 {
        eprintln!("warning: kappa_phi / kappa_d = {kratio} is below 10; the cutoff is not well separated from the plate scale");
    }
}

pub fn gfunc(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg
        .s_grid
        .as_ref()
        .ok_or_else(|| CliError::usage("gfunc needs sample points: pass --s or set s_grid"))?;
    let eps = cfg.eps.values();
    let params = eps
        .iter()
        .map(|&e| RegularizationParams::with_epsilon(e))
        .collect::<Result<Vec<_>, _>>()?;
    let eps_min = eps.iter().copied().fold(f64::INFINITY, f64::min);

    let mut header = vec!["s".to_string(), "g_closed".to_string()];
    header.extend(
        eps.iter()
            .map(|&e| format!("g_regularized[eps={}]", num(e))),
    );
    header.push(format!("remainder_R1[eps={}]", num(eps_min)));
    let mut table = Table {
        header,
        ..Table::default()
    };
    for &s in grid.values() {
        let mut row = vec![num(s), num(g_closed(s))];
        row.extend(params.iter().map(|p| num(g_regularized(s, p))));
        row.push(num(remainder_r1(s, eps_min, 1e-17)?));
        table.push(row);
    }
    Ok(table.into())
}

fn relative_spread(values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let scale = a.abs().max(b.abs());
            if scale > 0.0 {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    worst
}

pub fn casimir(cfg: &RunConfig) -> Result<Outcome, CliError> {
    warn_low_kratio(cfg.kratio);
    let geom = PlateGeometry::new(cfg.plate_size, cfg.separation)?;
    if geom.plates_too_close_to_size() {
        eprintln!("warning: d / L exceeds 0.1; edge effects are not modelled");
    }
    let spec = quad_spec(cfg)?;
    let w = SpectralWeight::casimir();
    let closed = casimir_closed_form(&geom);

    let mut routes: Vec<(String, String, f64)> = Vec::new();
    for &fam in &cfg.profile.0 {
        let profile = CutoffProfile::relative_to(fam, &geom, cfg.kratio)?;
        let q = h_casimir_quadrature(&w, &geom, &profile, &spec)?;
        routes.push(("quadrature".into(), fam.to_string(), q.value));
    }
    let e = h_casimir_expansion(&w, &geom, cfg.order)?;
    routes.push(("expansion".into(), "none".into(), e.value));
    routes.push(("closed_form".into(), "none".into(), closed));

    let values: Vec<f64> = routes.iter().map(|r| r.2).collect();
    let spread = relative_spread(&values);

    let mut table = Table::new(&[
        "route",
        "profile",
        "energy_nm_inv",
        "energy_eV",
        "rel_dev_closed_form",
    ]);
    table.note(format!("closed_form = {}", num(closed)));
    table.note(format!("max_pairwise_spread = {}", num(spread)));
    for (route, fam, v) in routes {
        table.push(vec![
            route,
            fam,
            num(v),
            num(v * HBAR_C_EV_NM),
            num((v - closed) / closed.abs()),
        ]);
    }
    let failure = (spread > cfg.spread_tol).then_some(CliError::SpreadExceeded {
        spread,
        tolerance: cfg.spread_tol,
    });
    Ok(Outcome { table, failure })
}

pub fn hcasimir(cfg: &RunConfig) -> Result<Outcome, CliError> {
    warn_low_kratio(cfg.kratio);
    let geom = PlateGeometry::new(cfg.plate_size, cfg.separation)?;
    let spec = quad_spec(cfg)?;
    let xi = cfg.xi.unwrap_or(cfg.eta);
    let w = SpectralWeight::new(cfg.amplitude, cfg.beta, cfg.gamma, xi, cfg.eta)?;

    let mut table = Table::new(&["route", "profile", "value", "error_bound", "value_eV"]);
    let mut push = |route: &str, fam: &str, v: f64, err: f64| {
        table.push(vec![
            route.to_string(),
            fam.to_string(),
            num(v),
            num(err),
            num(v * HBAR_C_EV_NM),
        ]);
    };
    for &fam in &cfg.profile.0 {
        let profile = CutoffProfile::relative_to(fam, &geom, cfg.kratio)?;
        let q = h_casimir_quadrature(&w, &geom, &profile, &spec)?;
        push("quadrature", &fam.to_string(), q.value, q.error_estimate);
        if fam != CutoffFamily::Sech {
            let e = h_casimir_expansion_regulated(&w, &geom, &profile, cfg.order)?;
            push(
                "expansion_regulated",
                &fam.to_string(),
                e.value,
                e.remainder_bound,
            );
        }
    }
    let first = cfg
        .profile
        .0
        .first()
        .copied()
        .unwrap_or(CutoffFamily::Gaussian);
    let lim = h_casimir_limit(&w, &geom, first, &spec)?;
    push(
        "quadrature_limit",
        &first.to_string(),
        lim.value,
        lim.error_estimate,
    );
    let e = h_casimir_expansion(&w, &geom, cfg.order)?;
    push("expansion", "none", e.value, e.remainder_bound);
    Ok(table.into())
}

pub fn lamb(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = LambContext::from_ratios(cfg.eta, cfg.log_ratio)?;
    let bethe = bethe_relative_shift(&ctx, cfg.order)?;
    let welton = welton_relative_shift(&ctx, cfg.order)?;
    let leading = leading_relative_shift(&ctx);
    let log = ctx.log_factor();

    let mut table = Table::new(&[
        "n",
        "bethe_term",
        "welton_term",
        "bethe_partial",
        "welton_partial",
        "bethe_remainder",
        "welton_remainder",
        "leading",
    ]);
    table.note(format!("bethe_relative_shift = {}", num(bethe.value)));
    table.note(format!("welton_relative_shift = {}", num(welton.value)));
    table.note(format!("leading_order = {}", num(leading)));

    let kb = bethe.series.truncation_index;
    let kw = welton.series.truncation_index;
    let (mut pb, mut pw) = (0.0, 0.0);
    for n in 1..=kb.max(kw) {
        let column = |k: usize, term: f64, partial: &mut f64, next: f64| {
            if n <= k {
                *partial += term;
                (num(term), num(*partial), num(next.abs()))
            } else {
                (num(f64::NAN), num(f64::NAN), num(f64::NAN))
            }
        };
        let (bt, bp, br) = column(
            kb,
            bethe_term(&ctx, n) / log,
            &mut pb,
            bethe_term(&ctx, n + 1) / log,
        );
        let (wt, wp, wr) = column(
            kw,
            welton_term(&ctx, n) / log,
            &mut pw,
            welton_term(&ctx, n + 1) / log,
        );
        table.push(vec![n.to_string(), bt, wt, bp, wp, br, wr, num(leading)]);
    }
    Ok(table.into())
}

pub fn qd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let material = cfg.resolve_material()?;
    let rows = match (&cfg.radius_grid, &cfg.separation_grid) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give exactly one of --R-grid and --d-grid, not both",
            ))
        }
        (None, None) => return Err(CliError::usage("qd-sweep needs --R-grid or --d-grid")),
        (Some(g), None) => sweep_radius(&material, cfg.carrier, cfg.separation, g.values())?,
        (None, Some(g)) => sweep_distance(&material, cfg.carrier, cfg.radius, g.values())?,
    };
    let reference = qd_cutoffs(&material, cfg.carrier, cfg.radius)?;

    let mut table = Table::new(&[
        "R_nm",
        "d_nm",
        "carrier",
        "eta_star",
        "validity_ratio",
        "valid",
        "shift_leading",
        "shift_order2",
    ]);
    table.note(format!(
        "masses: electron = {}, hole = {}",
        material.electron_mass_ratio, material.hole_mass_ratio
    ));
    table.note(format!("r_star_nm = {}", num(reference.r_star)));
    table.note(format!(
        "m_star = {} nm^-1 = {} eV",
        num(1.0 / reference.lambda_star),
        num(HBAR_C_EV_NM / reference.lambda_star)
    ));
    for r in rows {
        table.push(vec![
            num(r.radius),
            num(r.separation),
            r.carrier.to_string(),
            num(r.eta_star),
            num(r.validity_ratio),
            r.valid.to_string(),
            opt(r.shift_leading),
            opt(r.shift_order2),
        ]);
    }
    Ok(table.into())
}

/// `sum_k t^k / k!` truncated at `degree`, with exact derivatives.
fn scaled_polynomial(degree: usize) -> SmoothFunction<'static> {
    fn eval(degree: usize, skip: usize, t: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..=degree.saturating_sub(skip) {
            if k > 0 {
                term *= t / k as f64;
            }
            sum += term;
        }
        if skip > degree {
            0.0
        } else {
            sum
        }
    }
    SmoothFunction::analytic(move |t| eval(degree, 0, t), move |m, t| eval(degree, m, t))
}

fn gaussian_with_derivatives() -> SmoothFunction<'static> {
    SmoothFunction::analytic(
        |t: f64| (-t * t).exp(),
        |m, t| {
            let (mut h0, mut h1) = (1.0, 2.0 * t);
            let hm = if m == 0 {
                h0
            } else {
                for k in 1..m {
                    let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                }
                h1
            };
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * hm * (-t * t).exp()
        },
    )
}

pub fn em_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = cfg.em_order;
    let z = cfg.z;
    if z.fract() != 0.0 || !(2.0..=170.0).contains(&z) {
        return Err(CliError::usage(
            "em-check compares against ln((z-1)!) and needs an integer z in [2, 170]",
        ));
    }
    let mut table = Table::new(&[
        "check",
        "computed",
        "reference",
        "abs_error",
        "bound",
        "pass",
    ]);
    let mut failed = Vec::new();
    let mut record = |name: &str, computed: f64, reference: f64, bound: f64| {
        let err = (computed - reference).abs();
        let pass = err <= bound;
        if !pass {
            failed.push(name.to_string());
        }
        table.push(vec![
            name.to_string(),
            num(computed),
            num(reference),
            num(err),
            num(bound),
            pass.to_string(),
        ]);
    };

    let n_upper = 12u64;
    let poly = scaled_polynomial(2 * r.max(1) - 1);
    let direct: f64 = (0..=n_upper).map(|p| poly.value(p as f64)).sum();
    let em = em_sum(&poly, n_upper, r)?;
    record(
        "polynomial_exactness",
        em.estimate,
        direct,
        1e-12 * direct.abs(),
    );

    let g = gaussian_with_derivatives();
    let direct: f64 = (0..=20).map(|p| g.value(p as f64)).sum();
    let em = em_sum(&g, 20, r)?;
    record("gaussian_sum", em.estimate, direct, em.remainder_bound);

    let ln_fact: f64 = (1..z as u64).map(|k| (k as f64).ln()).sum();
    let target = (ln_fact - (z - 0.5) * z.ln() + z - 0.5 * (2.0 * std::f64::consts::PI).ln()) / z;
    let r_st = r.max(1);
    let series = fixed_eval(|n| stirling_term(n, z), r_st)?;
    // The reference itself is only good to a few ulps of ln((z-1)!) / z.
    let floor = 8.0 * f64::EPSILON * ln_fact.max(1.0) / z;
    record(
        "stirling_series",
        series.partial_sum,
        target,
        stirling_term(r_st + 1, z).abs().max(floor),
    );

    record(
        "bethe_inner_sum_1e4",
        bethe_inner_sum(10_000)?,
        FRAC_1_SQRT_2,
        0.012,
    );

    let failure = (!failed.is_empty()).then(|| CliError::CheckFailed(failed.join(", ")));
    Ok(Outcome { table, failure })
}
