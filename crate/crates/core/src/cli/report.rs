use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::geometry::SpaceDesc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn from_bool(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Outcome of one command. Key order is fixed, so identical runs serialize
/// to identical bytes unless `elapsed_ms` is requested.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub instance: Vec<SpaceDesc>,
    pub status: Status,
    pub witnesses: Value,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(
        claim: &str,
        instance: Vec<SpaceDesc>,
        seed: u64,
        status: Status,
        witnesses: Value,
    ) -> VerificationReport {
        VerificationReport { claim: claim.to_string(), instance, status, witnesses, seed, elapsed_ms: None }
    }

    pub fn error(claim: &str, instance: Vec<SpaceDesc>, seed: u64, err: &Error) -> VerificationReport {
        let witnesses = json!({ "error": err.kind(), "message": err.to_string() });
        VerificationReport::new(claim, instance, seed, Status::Error, witnesses)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let instance: Vec<String> = self.instance.iter().map(|d| d.to_string()).collect();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        writeln!(out, "claim: {}", self.claim).unwrap();
        writeln!(out, "instance: {}", instance.join(", ")).unwrap();
        writeln!(out, "status: {status}").unwrap();
        writeln!(out, "seed: {}", self.seed).unwrap();
        if let Some(ms) = self.elapsed_ms {
            writeln!(out, "elapsed_ms: {ms}").unwrap();
        }
        flatten(&mut out, "", &self.witnesses);
        out
    }
}

fn flatten(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(out, &key, child);
            }
        }
        Value::String(s) => writeln!(out, "{prefix}: {s}").unwrap(),
        other => writeln!(out, "{prefix}: {other}").unwrap(),
    }
}
