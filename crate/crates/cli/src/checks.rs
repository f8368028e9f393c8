//! Pass/fail tables shared by `verify-examples` and `selftest`.

use std::fmt;

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Measured error, or `NaN` when the computation itself failed.
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { suite, name: name.into(), value, tolerance }
    }

    /// A check whose computation returned an error.
    pub fn failed(suite: &'static str, name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self { suite, name: format!("{} ({err})", name.into()), value: f64::NAN, tolerance: 0.0 }
    }

    pub fn pass(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Prints the table and reports whether every check passed.
pub fn print_table(checks: &[Check]) -> bool {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("{:<16} {:<width$} {:>11} {:>9}  result", "suite", "check", "value", "tol");
    for c in checks {
        println!(
            "{:<16} {:<width$} {:>11.3e} {:>9.0e}  {}",
            c.suite,
            c.name,
            c.value,
            c.tolerance,
            if c.pass() { "PASS" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    println!("{} checks, {failed} failed", checks.len());
    failed == 0
}
