use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::output::to_json;

pub const SCHEMA: &str = "nilmoduli/1";

/// The result of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    /// Command name and resolved arguments.
    pub command: Value,
    /// SHA-256 of the canonical JSON of `command`.
    pub inputs_digest: String,
    pub outputs: Value,
    pub residuals: Value,
    pub passed: bool,
    /// Omitted when timing is disabled, so reports can be compared byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn new(command: Value, outputs: Value, residuals: Value, passed: bool) -> Self {
        let digest = Sha256::digest(to_json(&command).as_bytes());
        Self {
            schema: SCHEMA,
            inputs_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            command,
            outputs,
            residuals,
            passed,
            wall_time_s: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
