//! Structured proof reports.
//!
//! A report is an ordered list of stages.  Each stage carries its inputs,
//! its outputs, an optional reference value (the previously published
//! number the stage is compared against, serialized as `paperValue`), a
//! match verdict, and free-form notes.  Reports serialize to a versioned
//! JSON schema and render to a plain-text narrative with
//! reference-vs-computed columns.

use rug::Integer;
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

pub fn serialize_integer<S: serde::Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string_radix(10))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum StageKind {
    InitialBound,
    Reduction,
    Substitution,
    Sweep,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StageRecord {
    pub kind: StageKind,
    pub label: String,
    pub inputs: Vec<NamedValue>,
    pub outputs: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StageRecord {
    pub fn new(kind: StageKind, label: impl Into<String>) -> Self {
        StageRecord {
            kind,
            label: label.into(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            paper_value: None,
            matched: None,
            notes: Vec::new(),
        }
    }

    pub fn input(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.inputs.push(NamedValue {
            name: name.into(),
            value: value.into(),
        });
        self
    }

    pub fn output(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.outputs.push(NamedValue {
            name: name.into(),
            value: value.into(),
        });
        self
    }

    pub fn paper(mut self, value: impl Into<String>) -> Self {
        self.paper_value = Some(value.into());
        self
    }

    pub fn matched(mut self, ok: bool) -> Self {
        self.matched = Some(ok);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn output_of(&self, name: &str) -> Option<&str> {
        self.outputs
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value.as_str())
    }
}

/// A computed-vs-reference mismatch that is surfaced, never silently
/// corrected.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Discrepancy {
    pub what: String,
    pub printed: String,
    pub computed: String,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofReport {
    pub schema_version: u32,
    pub theorem_id: String,
    pub stages: Vec<StageRecord>,
    pub final_solutions: serde_json::Value,
    pub discrepancies: Vec<Discrepancy>,
}

impl ProofReport {
    pub fn new(theorem_id: impl Into<String>) -> Self {
        ProofReport {
            schema_version: SCHEMA_VERSION,
            theorem_id: theorem_id.into(),
            stages: Vec::new(),
            final_solutions: serde_json::Value::Null,
            discrepancies: Vec::new(),
        }
    }

    /// True when no stage recorded an explicit mismatch.
    pub fn all_matched(&self) -> bool {
        self.stages.iter().all(|s| s.matched != Some(false))
    }

    pub fn stage(&self, label: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem {}", self.theorem_id);
        for s in &self.stages {
            let kind = match s.kind {
                StageKind::InitialBound => "initial-bound",
                StageKind::Reduction => "reduction",
                StageKind::Substitution => "substitution",
                StageKind::Sweep => "sweep",
            };
            let _ = writeln!(out, "  [{kind}] {}", s.label);
            for v in &s.inputs {
                let _ = writeln!(out, "    in   {} = {}", v.name, v.value);
            }
            for v in &s.outputs {
                let _ = writeln!(out, "    out  {} = {}", v.name, v.value);
            }
            if let Some(p) = &s.paper_value {
                let verdict = match s.matched {
                    Some(true) => "matched",
                    Some(false) => "MISMATCH",
                    None => "recorded",
                };
                let _ = writeln!(out, "    ref  {p}  [{verdict}]");
            }
            for n in &s.notes {
                let _ = writeln!(out, "    note {n}");
            }
        }
        if let Some(arr) = self.final_solutions.as_array() {
            let _ = writeln!(out, "  final solutions ({}):", arr.len());
            for item in arr {
                let _ = writeln!(out, "    {}", compact_json(item));
            }
        } else if !self.final_solutions.is_null() {
            let _ = writeln!(out, "  final solutions: {}", compact_json(&self.final_solutions));
        }
        if !self.discrepancies.is_empty() {
            let _ = writeln!(out, "  discrepancies ({}):", self.discrepancies.len());
            for d in &self.discrepancies {
                let _ = writeln!(
                    out,
                    "    - {}: printed {} vs computed {} ({})",
                    d.what, d.printed, d.computed, d.note
                );
            }
        }
        out
    }
}

fn compact_json(v: &serde_json::Value) -> String {
    serde_json::to_string(v).unwrap_or_else(|_| "<unserializable>".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_schema_valid() {
        let r = ProofReport::new("thm3");
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["theoremId"], "thm3");
        assert!(v["stages"].as_array().unwrap().is_empty());
    }

    #[test]
    fn stage_serialization_uses_camel_case() {
        let mut r = ProofReport::new("thm4");
        r.stages.push(
            StageRecord::new(StageKind::InitialBound, "demo")
                .input("degree", "2")
                .output("bound", "10")
                .paper("5e27")
                .matched(true),
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["stages"][0]["kind"], "initialBound");
        assert_eq!(v["stages"][0]["paperValue"], "5e27");
        assert_eq!(v["stages"][0]["matched"], true);
        assert!(r.all_matched());
        let text = r.to_text();
        assert!(text.contains("[initial-bound] demo"));
        assert!(text.contains("5e27"));
    }
}
