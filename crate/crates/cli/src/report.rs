use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Command, RunConfig};

pub const SCHEMA: &str = "ecrank/report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Everything a run produced. No timings or paths, so identical configs
/// give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: Command,
    pub config: RunConfig,
    pub result: Value,
    pub tool: Tool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(p) => std::fs::write(p, self.to_json()),
            None => std::io::stdout().lock().write_all(self.to_json().as_bytes()),
        }
    }
}
