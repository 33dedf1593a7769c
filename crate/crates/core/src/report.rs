//! Pass/fail reports produced by the verification suites.

use serde::{Deserialize, Serialize};

/// Outcome of one identity family or property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    /// Number of individual instances evaluated.
    pub checked: usize,
    /// First violating instance, described with 1-based indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckEntry {
    pub fn pass(name: impl Into<String>, checked: usize) -> CheckEntry {
        CheckEntry { name: name.into(), passed: true, checked, counterexample: None, note: None }
    }

    pub fn fail(name: impl Into<String>, checked: usize, counterexample: impl Into<String>) -> CheckEntry {
        CheckEntry {
            name: name.into(),
            passed: false,
            checked,
            counterexample: Some(counterexample.into()),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckEntry {
        self.note = Some(note.into());
        self
    }
}

/// Accumulates instances of a single check, remembering the first failure.
#[derive(Debug)]
pub struct Tally {
    name: String,
    checked: usize,
    first_failure: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Tally {
        Tally { name: name.into(), checked: 0, first_failure: None }
    }

    /// Records one instance; `describe` is only called for the first failure.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    pub fn failed(&self) -> bool {
        self.first_failure.is_some()
    }

    pub fn finish(self) -> CheckEntry {
        match self.first_failure {
            None => CheckEntry::pass(self.name, self.checked),
            Some(c) => CheckEntry::fail(self.name, self.checked, c),
        }
    }
}

/// A named group of checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub passed: bool,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, entries: Vec<CheckEntry>) -> VerificationReport {
        let passed = entries.iter().all(|e| e.passed);
        VerificationReport { suite: suite.into(), passed, entries }
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}
