use std::time::Instant;

use anet_core::Error;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

/// Exit statuses.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// A machine-readable command report. Everything except `timing` depends
/// only on the parameters and the seed.
pub struct Report {
    command: String,
    params: Map<String, Value>,
    verdicts: Vec<Value>,
    counters: Map<String, Value>,
    artifacts: Map<String, Value>,
    started: Instant,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            params: Map::new(),
            verdicts: Vec::new(),
            counters: Map::new(),
            artifacts: Map::new(),
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn verdict(&mut self, check: &str, pass: bool, detail: impl Into<Value>) -> bool {
        self.verdicts.push(json!({ "check": check, "pass": pass, "detail": detail.into() }));
        pass
    }

    pub fn counter(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.counters.insert(key.into(), value.into());
        self
    }

    pub fn artifact(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.artifacts.insert(key.into(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v["pass"] == Value::Bool(true))
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut out = json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "verdicts": self.verdicts,
            "counters": self.counters,
            "artifacts": self.artifacts,
            "pass": self.passed(),
        });
        if timing {
            out["timing"] = json!({ "elapsed_ms": self.started.elapsed().as_millis() as u64 });
        }
        out
    }
}

/// Failures that end a command before its report is complete.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Cap(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Cap(_) => EXIT_CAP,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Cap(m) => ("resource_cap", m),
        };
        json!({
            "schema": SCHEMA,
            "command": command,
            "error": { "kind": kind, "message": message },
            "pass": false,
        })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } | Error::StateCapExceeded(_) => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;
