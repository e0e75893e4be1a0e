//! JSON certificates emitted by the command-line driver.

use serde::Serialize;
use serde_json::Value;

pub const CERTIFICATE_VERSION: &str = "wicks-certificate/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub assumptions: Vec<String>,
    pub version: String,
}

impl Certificate {
    pub fn new(command: &str, inputs: Value, result: Value, assumptions: Vec<String>) -> Self {
        Certificate {
            command: command.to_string(),
            inputs,
            result,
            assumptions,
            version: CERTIFICATE_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialise")
    }
}
