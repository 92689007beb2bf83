//! Small result type the verification suites report through.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    /// The check had nothing nontrivial to say (every instance was 0 = 0).
    Vacuous,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: String,
    pub status: CheckStatus,
    pub details: String,
}

impl CheckResult {
    pub fn pass(id: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: CheckStatus::Pass,
            details: details.into(),
        }
    }

    pub fn fail(id: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: CheckStatus::Fail,
            details: details.into(),
        }
    }

    pub fn skipped(id: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: CheckStatus::Skipped,
            details: details.into(),
        }
    }

    pub fn vacuous(id: impl Into<String>, details: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: CheckStatus::Vacuous,
            details: details.into(),
        }
    }

    pub fn of_residual(id: impl Into<String>, residual_is_zero: bool, detail: &str) -> Self {
        if residual_is_zero {
            CheckResult::pass(id, "residual 0")
        } else {
            CheckResult::fail(id, detail)
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.id, self.status.as_str(), self.details)
    }
}
