//! `casimir-lamb` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 physical-regime violation,
//! 4 numerical non-convergence or a failed agreement check.

mod commands;
mod config;
mod error;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "casimir-lamb",
    version,
    about = "Plate-regularized zero-point sums and Lamb-shift corrections"
)]
struct Cli {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sawtooth, its damped Fourier series and the comb remainder on a grid of s.
    Gfunc(GfuncArgs),
    /// Casimir energy by quadrature, expansion and closed form.
    Casimir(CasimirArgs),
    /// Plate functional for an arbitrary spectral weight.
    Hcasimir(HcasimirArgs),
    /// Relative Lamb-shift correction, term by term, in both pictures.
    Lamb(LambArgs),
    /// Quantum-dot shift over a radius grid or a separation grid.
    QdSweep(QdSweepArgs),
    /// Euler-Maclaurin self-test.
    EmCheck(EmCheckArgs),
}

#[derive(Debug, Args)]
struct GfuncArgs {
    /// Sample points: start:stop:step, a comma list or one value.
    #[arg(long = "s", allow_hyphen_values = true)]
    s: Option<String>,
    /// Damping parameters, comma separated.
    #[arg(long)]
    eps: Option<String>,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Plate size in nm (`um` suffix accepted).
    #[arg(long = "L")]
    plate_size: Option<String>,
    /// Plate separation in nm (`um` suffix accepted).
    #[arg(long = "d")]
    separation: Option<String>,
    /// Cutoff family: gaussian, quartic, sech, a comma list, or `all`.
    #[arg(long)]
    profile: Option<String>,
    /// Cutoff scale relative to pi/d.
    #[arg(long)]
    kratio: Option<String>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<String>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<String>,
}

impl GeometryArgs {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("plate_size", &self.plate_size),
            ("separation", &self.separation),
            ("profile", &self.profile),
            ("kratio", &self.kratio),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
        ]
    }
}

#[derive(Debug, Args)]
struct CasimirArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Largest accepted relative spread between routes.
    #[arg(long)]
    tol: Option<String>,
}

#[derive(Debug, Args)]
struct HcasimirArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    /// `optimal` or a fixed number of terms.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Debug, Args)]
struct LambArgs {
    /// kappa* / kappa_d.
    #[arg(long)]
    eta: Option<String>,
    /// ln(m* / kappa*).
    #[arg(long)]
    logratio: Option<String>,
    /// `optimal` or a fixed number of terms.
    #[arg(long = "r")]
    order: Option<String>,
}

#[derive(Debug, Args)]
struct QdSweepArgs {
    /// InAs or InAs-lh.
    #[arg(long)]
    material: Option<String>,
    #[arg(long = "electron-mass")]
    electron_mass: Option<String>,
    #[arg(long = "hole-mass")]
    hole_mass: Option<String>,
    /// electron, hole or exciton.
    #[arg(long)]
    carrier: Option<String>,
    /// Fixed plate separation for a radius sweep.
    #[arg(long = "d")]
    separation: Option<String>,
    /// Fixed radius for a separation sweep.
    #[arg(long = "R")]
    radius: Option<String>,
    #[arg(long = "R-grid")]
    radius_grid: Option<String>,
    #[arg(long = "d-grid")]
    separation_grid: Option<String>,
}

#[derive(Debug, Args)]
struct EmCheckArgs {
    /// Euler-Maclaurin order.
    #[arg(long = "r")]
    em_order: Option<String>,
    /// Integer argument of the Stirling check.
    #[arg(long)]
    z: Option<String>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gfunc(_) => "gfunc",
            Command::Casimir(_) => "casimir",
            Command::Hcasimir(_) => "hcasimir",
            Command::Lamb(_) => "lamb",
            Command::QdSweep(_) => "qd-sweep",
            Command::EmCheck(_) => "em-check",
        }
    }

    fn overrides(&self) -> Vec<(&'static str, &Option<String>)> {
        match self {
            Command::Gfunc(a) => vec![("s_grid", &a.s), ("eps", &a.eps)],
            Command::Casimir(a) => {
                let mut v = a.geometry.pairs();
                v.push(("spread_tol", &a.tol));
                v
            }
            Command::Hcasimir(a) => {
                let mut v = a.geometry.pairs();
                v.extend([
                    ("amplitude", &a.amplitude),
                    ("beta", &a.beta),
                    ("gamma", &a.gamma),
                    ("eta", &a.eta),
                    ("xi", &a.xi),
                    ("order", &a.order),
                ]);
                v
            }
            Command::Lamb(a) => vec![
                ("eta", &a.eta),
                ("log_ratio", &a.logratio),
                ("order", &a.order),
            ],
            Command::QdSweep(a) => vec![
                ("material", &a.material),
                ("electron_mass", &a.electron_mass),
                ("hole_mass", &a.hole_mass),
                ("carrier", &a.carrier),
                ("separation", &a.separation),
                ("radius", &a.radius),
                ("radius_grid", &a.radius_grid),
                ("separation_grid", &a.separation_grid),
            ],
            Command::EmCheck(a) => vec![("em_order", &a.em_order), ("z", &a.z)],
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    for (key, value) in cli.command.overrides() {
        if let Some(v) = value {
            cfg.set(key, v)
                .map_err(|e| CliError::usage(format!("--{key}: {e}")))?;
        }
    }
    if let Some(out) = &cli.output {
        cfg.set("output", out)?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = effective_config(cli)?;
    let outcome = match &cli.command {
        Command::Gfunc(_) => commands::gfunc(&cfg)?,
        Command::Casimir(_) => commands::casimir(&cfg)?,
        Command::Hcasimir(_) => commands::hcasimir(&cfg)?,
        Command::Lamb(_) => commands::lamb(&cfg)?,
        Command::QdSweep(_) => commands::qd_sweep(&cfg)?,
        Command::EmCheck(_) => commands::em_check(&cfg)?,
    };
    let text = outcome.table.render(cli.command.name(), &cfg);
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
