use rbsys::verdict::Violation;
use rbsys::Scalar;
use serde_json::{json, Map, Value};

use crate::doc::scalar_to_value;

/// Text lines for people plus a JSON object carrying the same numbers.
#[derive(Clone, Debug)]
pub struct Report {
    pub passed: bool,
    pub lines: Vec<String>,
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::from(command));
        Report { passed: true, lines: Vec::new(), fields }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.into(), value.into());
    }

    pub fn fail(&mut self) {
        self.passed = false;
    }

    /// Records the witness, marks the report failed.
    pub fn witness(&mut self, v: &Violation) {
        self.fail();
        self.line(format!("witness: {v}"));
        self.set("witness", violation_json(v));
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            crate::error::EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.fields.clone();
        out.insert("status".into(), Value::from(if self.passed { "pass" } else { "fail" }));
        out.insert("exit_code".into(), Value::from(self.exit_code()));
        Value::Object(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Basis indices are 1-based, matching the text rendering.
pub fn violation_json(v: &Violation) -> Value {
    json!({
        "law": v.law.to_string(),
        "basis": v.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "lhs": scalars_json(&v.lhs),
        "rhs": scalars_json(&v.rhs),
    })
}

pub fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_value).collect())
}

pub fn scalars_text(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn usizes_text(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
