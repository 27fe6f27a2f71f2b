//! Serializable snapshots of machine configurations.

use serde::Serialize;

use crate::machine::memory::{Kind, Memory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeapEntry {
    pub name: String,
    pub pol: String,
    pub value_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackEntry {
    pub name: String,
    pub pol: String,
    pub kind: Kind,
    pub text: String,
}

/// One line of a machine trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    pub rule: String,
    pub command_text: String,
    pub heap: Vec<HeapEntry>,
    pub stack: Vec<Vec<StackEntry>>,
    pub depth: usize,
    pub high_water: usize,
}

impl TraceEntry {
    pub fn snapshot(step: usize, rule: &str, command_text: String, m: &Memory, high_water: usize) -> Self {
        TraceEntry {
            step,
            rule: rule.to_string(),
            command_text,
            heap: m
                .heap
                .iter()
                .map(|b| HeapEntry {
                    name: b.name.to_string(),
                    pol: b.polarity.to_string(),
                    value_text: b.content.to_string(),
                })
                .collect(),
            stack: m
                .stack
                .iter()
                .map(|f| {
                    f.bindings
                        .iter()
                        .map(|b| StackEntry {
                            name: b.name.to_string(),
                            pol: b.polarity.to_string(),
                            kind: b.kind,
                            text: b.content.to_string(),
                        })
                        .collect()
                })
                .collect(),
            depth: m.depth(),
            high_water,
        }
    }
}
