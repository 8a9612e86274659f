//! Pass/fail records produced by the checkers.

use std::fmt;

use serde::Serialize;

/// Outcome of one named check. A failed verdict always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// Passes when `witness` is `None`.
    pub fn from_witness(check: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Verdict::pass(check),
            Some(w) => Verdict::fail(check, w),
        }
    }

    /// A passing verdict that still records a note (e.g. the witness of an
    /// expected failure).
    pub fn pass_with_note(check: impl Into<String>, note: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            passed: true,
            witness: Some(note.into()),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        match &self.witness {
            Some(w) => write!(f, "[{tag}] {} ({w})", self.check),
            None => write!(f, "[{tag}] {}", self.check),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdicts: Vec<Verdict>,
}

impl Certificate {
    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn get(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

impl Extend<Verdict> for Certificate {
    fn extend<T: IntoIterator<Item = Verdict>>(&mut self, iter: T) {
        self.verdicts.extend(iter);
    }
}
