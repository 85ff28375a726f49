//! Verification reports: one record per check, text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::Violation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub params: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl CheckRecord {
    pub fn pass(check: impl Into<String>, params: impl Into<String>) -> Self {
        CheckRecord {
            check: check.into(),
            params: params.into(),
            pass: true,
            detail: None,
            witness: None,
        }
    }

    pub fn fail(check: impl Into<String>, params: impl Into<String>, violation: Violation) -> Self {
        CheckRecord {
            check: check.into(),
            params: params.into(),
            pass: false,
            detail: Some(violation.what),
            witness: Some(violation.witness),
        }
    }

    pub fn from_outcome(check: impl Into<String>, params: impl Into<String>, outcome: Result<(), Violation>) -> Self {
        match outcome {
            Ok(()) => CheckRecord::pass(check, params),
            Err(v) => CheckRecord::fail(check, params, v),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
        self.finish();
    }

    /// Appends every record of `other`, prefixing check names.
    pub fn absorb(&mut self, prefix: &str, other: VerifyReport) {
        for mut r in other.records {
            if !prefix.is_empty() {
                r.check = format!("{prefix}{}", r.check);
            }
            self.records.push(r);
        }
        self.finish();
    }

    /// Recomputes the summary from the records.
    pub fn finish(&mut self) {
        let passed = self.records.iter().filter(|r| r.pass).count();
        self.summary = Summary {
            total: self.records.len(),
            passed,
            failed: self.records.len() - passed,
        };
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status} {}", r.check);
            if !r.params.is_empty() {
                let _ = write!(out, " [{}]", r.params);
            }
            if let Some(d) = &r.detail {
                let _ = write!(out, ": {d}");
            }
            if let Some(w) = &r.witness {
                if !w.is_empty() {
                    let _ = write!(out, " witness={w:?}");
                }
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_records() {
        let mut r = VerifyReport::default();
        r.push(CheckRecord::pass("a", ""));
        r.push(CheckRecord::fail("b", "k=2", Violation::new("broken", vec![3, 4])));
        assert_eq!(r.summary, Summary { total: 2, passed: 1, failed: 1 });
        assert!(!r.all_pass());
        let text = r.render_text();
        assert!(text.contains("FAIL b [k=2]: broken witness=[3, 4]"));
        let back: VerifyReport = serde_json::from_str(&r.render_json()).unwrap();
        assert_eq!(back, r);
    }
}
