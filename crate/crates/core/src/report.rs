//! Uniform outcome carrier for analyses, theorem verifiers, and searches.

use crate::abelian::Element;
use serde::Serialize;
use std::collections::BTreeMap;

/// One named value inside a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessItem {
    pub name: String,
    pub coords: Vec<u64>,
}

/// A concrete input tuple (with values) demonstrating a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub items: Vec<WitnessItem>,
}

impl Witness {
    pub fn new(label: impl Into<String>) -> Self {
        Witness {
            label: label.into(),
            items: Vec::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: &Element) -> Self {
        self.items.push(WitnessItem {
            name: name.into(),
            coords: value.coords.clone(),
        });
        self
    }

    pub fn with_index(mut self, name: impl Into<String>, idx: usize) -> Self {
        self.items.push(WitnessItem {
            name: name.into(),
            coords: vec![idx as u64],
        });
        self
    }
}

/// Outcome of an analysis or theorem verification.
///
/// Invariant: `verdict == false` implies `witnesses` nonempty.
/// `falsification` marks a false verdict obtained with all of a theorem's
/// hypotheses satisfied; it is the most valuable outcome the tool can produce
/// and is reported, never suppressed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub verdict: bool,
    pub falsification: bool,
    pub witnesses: Vec<Witness>,
    pub counters: BTreeMap<String, u64>,
    pub hypothesis_notes: BTreeMap<String, bool>,
}

impl VerdictReport {
    pub fn pass() -> Self {
        VerdictReport {
            verdict: true,
            falsification: false,
            witnesses: Vec::new(),
            counters: BTreeMap::new(),
            hypothesis_notes: BTreeMap::new(),
        }
    }

    pub fn fail(witness: Witness) -> Self {
        VerdictReport {
            verdict: false,
            falsification: false,
            witnesses: vec![witness],
            counters: BTreeMap::new(),
            hypothesis_notes: BTreeMap::new(),
        }
    }

    pub fn note(mut self, key: impl Into<String>, value: bool) -> Self {
        self.hypothesis_notes.insert(key.into(), value);
        self
    }

    pub fn count(mut self, key: impl Into<String>, n: u64) -> Self {
        *self.counters.entry(key.into()).or_insert(0) += n;
        self
    }

    pub fn mark_falsification(mut self) -> Self {
        self.falsification = true;
        self
    }

    /// Folds another report in: verdict AND, witnesses and counters appended,
    /// notes merged. Used when a verifier aggregates sub-checks.
    pub fn absorb(&mut self, other: VerdictReport) {
        self.verdict &= other.verdict;
        self.falsification |= other.falsification;
        self.witnesses.extend(other.witnesses);
        for (k, v) in other.counters {
            *self.counters.entry(k).or_insert(0) += v;
        }
        self.hypothesis_notes.extend(other.hypothesis_notes);
    }
}
