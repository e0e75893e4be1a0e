//! Named pass/fail clauses shared by the verifiers.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Clause {
    pub fn pass(name: &str) -> Self {
        Clause { name: name.to_string(), passed: true, detail: None }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Self {
        Clause { name: name.to_string(), passed: false, detail: Some(detail.into()) }
    }

    pub fn from_result(name: &str, r: std::result::Result<(), String>) -> Self {
        match r {
            Ok(()) => Clause::pass(name),
            Err(d) => Clause::fail(name, d),
        }
    }
}

pub fn all_passed(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.passed)
}

/// Names of the clauses that failed.
pub fn failures(clauses: &[Clause]) -> Vec<&str> {
    clauses.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
}
