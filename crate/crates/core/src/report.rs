use serde::{Deserialize, Serialize};

/// Outcome of an exact identity check over a finite set of cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report { check: check.into(), passed: true, cases: 0, failure: None }
    }

    /// Counts one case; the first failing case is kept as the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.failure = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.record(false, || witness.into());
    }

    /// Folds another report's cases into this one.
    pub fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        if !other.passed && self.passed {
            self.passed = false;
            self.failure = Some(format!("{}: {}", other.check, other.failure.unwrap_or_default()));
        }
    }
}
