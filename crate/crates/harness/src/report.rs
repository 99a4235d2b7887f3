//! Trial bookkeeping with deterministic serialization.

use serde::Serialize;
use std::collections::BTreeMap;

/// One failed trial. The germ is stored in the jet exchange format, so the
/// case can be replayed by parsing it back, and independently regenerated
/// from `(seed, index)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialFailure {
    pub index: u64,
    pub germ: String,
    pub message: String,
}

/// Outcome of a suite run. A run passes exactly when `failures` is empty;
/// skipped draws are counted by reason instead of being silently dropped.
///
/// Serialization is deterministic: maps are ordered, failures appear in
/// trial order, and reruns with the same `(suite, trials, seed)` produce
/// byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub skipped: BTreeMap<String, u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub failures: Vec<TrialFailure>,
}

impl TrialReport {
    pub(crate) fn new(suite: &str, seed: u64) -> Self {
        TrialReport {
            suite: suite.to_string(),
            seed,
            trials: 0,
            skipped: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            notes: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub(crate) fn tol(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    pub(crate) fn skip(&mut self, reason: &str) {
        *self.skipped.entry(reason.to_string()).or_insert(0) += 1;
    }

    pub(crate) fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    pub(crate) fn fail(&mut self, index: u64, germ: String, message: String) {
        self.failures.push(TrialFailure {
            index,
            germ,
            message,
        });
    }
}
