use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            witness: None,
            instances: None,
            failures: None,
        }
    }

    pub fn witness(mut self, w: Option<Value>) -> Self {
        self.witness = w;
        self
    }

    pub fn counts(mut self, instances: usize, failures: usize) -> Self {
        self.instances = Some(instances);
        self.failures = Some(failures);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

/// Everything a command produced. Rendered either as text or as one JSON
/// document; `summary` and `result` are key-sorted so output is stable.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<String>,
    pub checks: Vec<Check>,
    pub summary: Map<String, Value>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub result: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub exit: i32,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            fingerprint: None,
            checks: Vec::new(),
            summary: Map::new(),
            result: Map::new(),
            verdict: None,
            error: None,
            exit: 0,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.result.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        if let Some(f) = &self.fingerprint {
            let _ = writeln!(out, "datum: {f}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error ({}): {}", e.kind, e.message);
        }
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            let _ = write!(out, "  {:<32} {status}", c.name);
            if let (Some(i), Some(f)) = (c.instances, c.failures) {
                let _ = write!(out, "  ({f}/{i} failing)");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  witness {w}");
            }
            out.push('\n');
        }
        for (k, v) in self.result.iter().chain(&self.summary) {
            match v {
                Value::String(s) => writeln!(out, "{k}: {s}"),
                _ => writeln!(out, "{k}: {v}"),
            }
            .expect("writing to a String");
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "{v}");
        }
        let _ = writeln!(out, "exit: {}", self.exit);
        out
    }
}
