//! Machine-readable reports: stable key order, exact rationals as `p/q`
//! strings, expressions in the canonical print syntax. Byte-identical for a
//! fixed manifest and flag set.

use serde::Serialize;

use spaceform_core::check::{CheckResult, CheckStatus};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifest: String,
    pub command: String,
    pub environment: Environment,
    pub checks: Vec<CheckEntry>,
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    /// Exterior-derivative convention detected on the instance: the factor
    /// 1/2 form ("half"), the bare form ("plain"), or "undetermined".
    pub deta_convention: String,
    /// Which block tensor carries the terms linear in h.
    pub block_labeling: String,
    pub gauge: String,
    /// Factor on the tau term that makes the 3-d reconstruction exact,
    /// determined from the instance ("3" on every conforming example).
    pub tau_factor: String,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            deta_convention: "undetermined".into(),
            block_labeling: "r4_linear_in_h,r5_quadratic_in_h,r6_eta_terms".into(),
            gauge: "none".into(),
            tau_factor: "n/a".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub status: String,
    pub details: String,
}

impl From<CheckResult> for CheckEntry {
    fn from(c: CheckResult) -> Self {
        CheckEntry {
            id: c.id,
            status: c.status.as_str().to_string(),
            details: c.details,
        }
    }
}

impl Report {
    pub fn new(manifest: &str, command: &str) -> Self {
        Report {
            manifest: manifest.to_string(),
            command: command.to_string(),
            environment: Environment::default(),
            checks: Vec::new(),
            status: "pass".into(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check.into());
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckResult>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn finalize(&mut self) {
        let failed = self.checks.iter().any(|c| c.status == "fail");
        self.status = if failed { "fail" } else { "pass" }.into();
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == "fail")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary, one line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} ({}): {}\n",
            self.manifest, self.command, self.status
        ));
        out.push_str(&format!(
            "  environment: deta_convention={} gauge={} tau_factor={}\n",
            self.environment.deta_convention,
            self.environment.gauge,
            self.environment.tau_factor
        ));
        for c in &self.checks {
            let marker = match c.status.as_str() {
                "pass" => "ok",
                "fail" => "FAIL",
                "skipped" => "--",
                "vacuous" => "(0=0)",
                other => other,
            };
            if c.details.is_empty() {
                out.push_str(&format!("  [{marker:>5}] {}\n", c.id));
            } else {
                out.push_str(&format!("  [{marker:>5}] {}: {}\n", c.id, c.details));
            }
        }
        out
    }
}

/// Shorthand used across the pipeline for residual-style checks.
pub fn residual_check(id: &str, zero: bool, fail_details: String) -> CheckResult {
    if zero {
        CheckResult::pass(id, "residual 0")
    } else {
        CheckResult {
            id: id.to_string(),
            status: CheckStatus::Fail,
            details: fail_details,
        }
    }
}
