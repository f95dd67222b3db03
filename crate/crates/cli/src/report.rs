//! Machine-readable outputs: the JSON run report and the CSV learning curve.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use qteach::trainer::{CurvePoint, TrainResult, ValidationStats};

use crate::config::ExperimentConfig;

/// Per-restart summary without the curve; the best restart's curve ships in
/// `result` and in the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart_index: u32,
    pub exact_fidelity: f64,
    pub error: f64,
    pub converged: bool,
    pub steps_used: u64,
    pub weight_updates: u64,
}

impl From<&TrainResult> for RestartSummary {
    fn from(result: &TrainResult) -> Self {
        Self {
            restart_index: result.restart_index,
            exact_fidelity: result.exact_fidelity,
            error: result.error,
            converged: result.converged,
            steps_used: result.steps_used,
            weight_updates: result.weight_updates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub artifact_version: String,
    pub config: ExperimentConfig,
    pub resolved_seed: u64,
    pub result: TrainResult,
    pub restarts: Vec<RestartSummary>,
    pub validation: ValidationStats,
    pub wall_clock_seconds: f64,
}

/// Writes bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create directory {}", parent.display()))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move {} into place", path.display()))?;
    Ok(())
}

pub fn write_report(path: &Path, report: &RunReport) -> anyhow::Result<()> {
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    write_atomic(path, json.as_bytes())
}

/// Learning-curve CSV with the fixed header `step,exact_fidelity,learning_rate`.
pub fn curve_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("step,exact_fidelity,learning_rate\n");
    for point in curve {
        out.push_str(&format!(
            "{},{},{}\n",
            point.step, point.exact_fidelity, point.learning_rate
        ));
    }
    out
}

pub fn write_curve(path: &Path, curve: &[CurvePoint]) -> anyhow::Result<()> {
    write_atomic(path, curve_to_csv(curve).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_csv_has_header_and_shortest_roundtrip_floats() {
        let curve = vec![
            CurvePoint {
                step: 0,
                exact_fidelity: 0.5,
                learning_rate: 0.1,
            },
            CurvePoint {
                step: 50,
                exact_fidelity: 0.9375,
                learning_rate: 0.014142135623730951,
            },
        ];
        let csv = curve_to_csv(&curve);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("step,exact_fidelity,learning_rate"));
        assert_eq!(lines.next(), Some("0,0.5,0.1"));
        assert_eq!(lines.next(), Some("50,0.9375,0.014142135623730951"));
    }
}
