use serde::Serialize;
use serde_json::{json, Value};

/// One named verification and its outcome.
#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

/// Ordered list of checks. The pipeline stops at the first failure, so the
/// failing check (if any) is always the last one.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub artifacts: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            passed: true,
            checks: Vec::new(),
            artifacts: serde_json::Map::new(),
        }
    }

    /// Records a check and returns whether it passed.
    pub fn check(&mut self, name: &'static str, passed: bool, detail: Value) -> bool {
        self.passed &= passed;
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
        passed
    }

    pub fn artifact(&mut self, key: &str, value: Value) {
        self.artifacts.insert(key.to_string(), value);
    }

    pub fn failed_check(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name)
    }

    pub fn print(&self, json_mode: bool) {
        if json_mode {
            println!(
                "{}",
                serde_json::to_string(self).expect("report serializes")
            );
            return;
        }
        println!("{}", self.command);
        for c in &self.checks {
            println!(
                "  {}: {}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                compact(&c.detail)
            );
        }
        match self.failed_check() {
            None => println!("result: PASS"),
            Some(name) => println!("result: FAIL ({name})"),
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn print_error(json_mode: bool, err: &anyhow::Error) {
    if json_mode {
        println!(
            "{}",
            json!({ "passed": false, "error": format!("{err:#}") })
        );
    } else {
        eprintln!("error: {err:#}");
    }
}
