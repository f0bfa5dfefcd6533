use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Confirmed,
    Inconclusive,
    Refuted,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Confirmed => 0,
            Outcome::Inconclusive | Outcome::Refuted => 1,
            Outcome::Error => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Outcome::Confirmed => "confirmed",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Refuted => "refuted",
            Outcome::Error => "error",
        }
    }
}

/// Result of one command. Everything except `timings_ms` is a function of
/// the flags and input files.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outcome: Outcome,
    pub evidence: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            outcome: Outcome::Confirmed,
            evidence: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn evidence(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.evidence.insert(key.to_string(), value.into());
        self
    }

    pub fn timing(&mut self, key: &str, start: std::time::Instant) {
        self.timings_ms
            .insert(key.to_string(), start.elapsed().as_millis() as u64);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "param {k}: {}", scalar(v)).unwrap();
        }
        writeln!(out, "outcome: {}", self.outcome.as_str()).unwrap();
        for (k, v) in &self.evidence {
            match v {
                Value::Array(items) => {
                    writeln!(out, "{k}: {} item(s)", items.len()).unwrap();
                    for item in items {
                        writeln!(out, "  {}", scalar(item)).unwrap();
                    }
                }
                _ => writeln!(out, "{k}: {}", scalar(v)).unwrap(),
            }
        }
        for (k, ms) in &self.timings_ms {
            writeln!(out, "timing_ms {k}: {ms}").unwrap();
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}
