//! Machine-readable report documents: JSON with sorted keys, byte-stable for
//! fixed inputs, seed, and tool version.

use crate::format::emit_instance;
use gammaring_core::{GammaRing, VerdictReport, Witness};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceInfo {
    pub name: String,
    /// Hex SHA-256 of the canonical emission; empty when no single instance
    /// file backs the run (e.g. random search).
    pub hash: String,
}

impl InstanceInfo {
    pub fn of(gr: &GammaRing) -> Self {
        let canonical = emit_instance(gr);
        let hash = format!("{:x}", Sha256::digest(canonical.as_bytes()));
        InstanceInfo {
            name: gr.name().unwrap_or("unnamed").to_string(),
            hash,
        }
    }

    pub fn synthetic(name: impl Into<String>) -> Self {
        InstanceInfo {
            name: name.into(),
            hash: String::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub instance: InstanceInfo,
    pub command: String,
    pub hypothesis_notes: BTreeMap<String, bool>,
    pub verdict: bool,
    pub falsification: bool,
    pub witnesses: Vec<Witness>,
    pub counters: BTreeMap<String, u64>,
    pub seed: u64,
    /// Wall time in milliseconds; 0 unless `--timing` was passed, keeping
    /// default reports byte-stable.
    pub elapsed: u64,
}

impl ReportDocument {
    pub fn new(instance: InstanceInfo, command: impl Into<String>, seed: u64) -> Self {
        ReportDocument {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            instance,
            command: command.into(),
            hypothesis_notes: BTreeMap::new(),
            verdict: true,
            falsification: false,
            witnesses: Vec::new(),
            counters: BTreeMap::new(),
            seed,
            elapsed: 0,
        }
    }

    /// Copies one verifier outcome into the document, optionally prefixing
    /// every note/counter key and witness label (used by run-everything mode).
    pub fn fold(&mut self, r: &VerdictReport, prefix: Option<&str>) {
        self.verdict &= r.verdict;
        self.falsification |= r.falsification;
        let key = |k: &str| match prefix {
            Some(p) => format!("{p}.{k}"),
            None => k.to_string(),
        };
        for (k, v) in &r.hypothesis_notes {
            self.hypothesis_notes.insert(key(k), *v);
        }
        for (k, v) in &r.counters {
            self.counters.insert(key(k), *v);
        }
        for w in &r.witnesses {
            let mut w = w.clone();
            if let Some(p) = prefix {
                w.label = format!("{p}: {}", w.label);
            }
            self.witnesses.push(w);
        }
    }

    pub fn push_witness(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    /// Serializes with sorted keys at every level (serde_json maps are
    /// BTreeMaps, and structs are converted through Value first).
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value prints");
        s.push('\n');
        s
    }
}
