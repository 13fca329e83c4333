//! Pass/fail reports for relation verification suites.

use std::fmt;

/// Outcome of a verification sweep: how many instances were checked and
/// a description of every residual found.
#[derive(Debug, Default, Clone)]
pub struct Report {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all_passed() {
            write!(f, "{} checks, all passed", self.checks)
        } else {
            writeln!(
                f,
                "{} checks, {} FAILED:",
                self.checks,
                self.failures.len()
            )?;
            for failure in &self.failures {
                writeln!(f, "  {failure}")?;
            }
            Ok(())
        }
    }
}
