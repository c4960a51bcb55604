use std::fmt::Write as _;

use crate::config::RunConfig;

/// `hbar c` in eV nm, for reporting inverse lengths as energies.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// Scientific notation with ten significant digits; `NaN` for missing values.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.9e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    num(x.unwrap_or(f64::NAN))
}

/// A CSV table preceded by `#` comment lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub notes: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Renders with the command name and effective configuration echoed first.
    pub fn render(&self, command: &str, cfg: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# casimir-lamb {command}");
        for (k, v) in cfg.entries() {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}
