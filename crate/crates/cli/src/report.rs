//! The JSON report shared by every command.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use towerlim::tower::RowStatus;

use crate::cache::Source;
use crate::{CliError, VERSION};

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_ms: u64,
    /// Per-level engine work, with where the data came from.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelTiming>,
}

#[derive(Debug, Serialize)]
pub struct LevelTiming {
    pub n: u32,
    pub ms: u64,
    pub source: Source,
}

/// Everything outside `timings` is a pure function of the inputs.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
    pub status: RowStatus,
    pub result: T,
    pub timings: Timings,
}

pub fn ms_since(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// `fail` dominates, then `pass`, then `below-threshold`, then `measured-only`.
pub fn overall(statuses: impl IntoIterator<Item = RowStatus>) -> RowStatus {
    let mut out = RowStatus::MeasuredOnly;
    for s in statuses {
        out = match (out, s) {
            (RowStatus::Fail, _) | (_, RowStatus::Fail) => RowStatus::Fail,
            (RowStatus::Pass, _) | (_, RowStatus::Pass) => RowStatus::Pass,
            (RowStatus::BelowThreshold, _) | (_, RowStatus::BelowThreshold) => {
                RowStatus::BelowThreshold
            }
            _ => RowStatus::MeasuredOnly,
        };
    }
    out
}

pub fn verdict(ok: bool) -> RowStatus {
    if ok {
        RowStatus::Pass
    } else {
        RowStatus::Fail
    }
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, digest: Option<String>, status: RowStatus, result: T) -> Self {
        Report {
            tool: "towerlim",
            version: VERSION,
            command: command.to_string(),
            config_digest: digest,
            status,
            result,
            timings: Timings::default(),
        }
    }

    /// Write the report to `out` (or stdout) and map a failing status to
    /// the violation exit path.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
        text.push('\n');
        match out {
            Some(path) => {
                std::fs::write(path, &text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                println!("{}: {}", self.command, status_word(self.status));
            }
            None => print!("{text}"),
        }
        if self.status == RowStatus::Fail {
            return Err(CliError::Violation(format!("{} reported a failing row", self.command)));
        }
        Ok(())
    }
}

fn status_word(s: RowStatus) -> &'static str {
    match s {
        RowStatus::Pass => "pass",
        RowStatus::Fail => "fail",
        RowStatus::BelowThreshold => "below-threshold",
        RowStatus::MeasuredOnly => "measured-only",
    }
}
