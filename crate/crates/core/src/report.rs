//! Outcome of an exhaustive axiom check.

use serde::{Deserialize, Serialize};

/// One violated axiom together with the first witness found for it.
///
/// Witnesses are element labels in the order the axiom quantifies over them.
/// Checkers always report the lexicographically smallest index tuple, so a
/// report does not depend on how the search was partitioned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub subject: String,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport {
            subject: subject.into(),
            passed: true,
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, axiom: impl Into<String>, witness: Vec<String>) {
        self.violations.push(Violation {
            axiom: axiom.into(),
            witness,
        });
        self.passed = false;
    }

    /// Records a violation if `witness` is `Some`.
    pub fn record(&mut self, axiom: &str, witness: Option<Vec<String>>) {
        if let Some(w) = witness {
            self.push(axiom, w);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        for v in other.violations {
            self.push(v.axiom, v.witness);
        }
    }

    pub fn violation(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        if self.passed {
            format!("{}: passed", self.subject)
        } else {
            let parts: Vec<String> = self
                .violations
                .iter()
                .map(|v| format!("{} at ({})", v.axiom, v.witness.join(", ")))
                .collect();
            format!("{}: FAILED: {}", self.subject, parts.join("; "))
        }
    }
}
