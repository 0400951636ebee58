//! Verification reports shared by the verifiers and the command line.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violated,
    Vacuous,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Violated
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Violated => "violated",
            Status::Vacuous => "vacuous",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub paper_anchor: String,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    /// `pass` unless some check is violated.
    pub overall: Status,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        Report {
            command: command.into(),
            inputs,
            checks: Vec::new(),
            overall: Status::Pass,
        }
    }

    pub fn push(&mut self, name: &str, status: Status, anchor: &str, details: Value) {
        if status == Status::Violated {
            self.overall = Status::Violated;
        }
        self.checks.push(Check {
            name: name.into(),
            status,
            paper_anchor: anchor.into(),
            details,
        });
    }

    pub fn assert(&mut self, name: &str, ok: bool, anchor: &str, details: Value) {
        self.push(name, Status::from_bool(ok), anchor, details);
    }

    pub fn passed(&self) -> bool {
        self.overall != Status::Violated
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Violated)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.command, self.inputs)?;
        for c in &self.checks {
            writeln!(f, "  [{:<8}] {} ({})", c.status.as_str(), c.name, c.paper_anchor)?;
            if !c.details.is_null() {
                writeln!(f, "             {}", c.details)?;
            }
        }
        write!(f, "overall: {}", self.overall)
    }
}
