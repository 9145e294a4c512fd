//! Structured pass/fail reports shared by the verifier and the tree validator.

use std::fmt;

/// Result of a single named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Empty on pass; a short human-readable reason on failure.
    pub detail: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            detail: String::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }
}

/// A bundle of check results. Overall pass iff every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, result: CheckResult) {
        self.checks.push(result);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    /// One line per check: `<check>: pass|fail <detail>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "{}: pass", c.name)?;
            } else {
                writeln!(f, "{}: fail {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
