//! Machine-readable check reports.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// The identity or inequality being checked, as a formula.
    pub reference: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub checks: Vec<CheckRecord>,
    /// Command-specific data (dual structure, spectral bounds, ...).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report { command: command.into(), input: input.into(), checks: Vec::new(), details: serde_json::Value::Null }
    }

    /// Records `residual ≤ tolerance`; a NaN residual fails.
    pub fn check(&mut self, id: &str, reference: &str, residual: f64, tolerance: f64) -> &mut Self {
        self.checks.push(CheckRecord {
            check_id: id.into(),
            reference: reference.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
        self
    }

    /// A yes/no condition, recorded as residual `0` or `1` against tolerance `0`.
    pub fn flag(&mut self, id: &str, reference: &str, holds: bool) -> &mut Self {
        self.check(id, reference, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with_details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).expect("report details serialize");
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.input);
        let width = self.checks.iter().map(|c| c.check_id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {:width$}  {:.3e} <= {:.1e}  {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.check_id,
                c.residual,
                c.tolerance,
                c.reference,
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tolerance() {
        let mut r = Report::new("verify", "x.json");
        r.check("a", "x = x", 0.0, 0.0).check("b", "y = y", 1e-11, 1e-12).check("c", "z", f64::NAN, 1.0);
        r.flag("d", "p", true);
        let pass: Vec<bool> = r.checks.iter().map(|c| c.pass).collect();
        assert_eq!(pass, [true, false, false, true]);
        assert!(!r.passed());
        assert!(r.to_text().ends_with("4 checks, 2 failed\n"));
    }
}
