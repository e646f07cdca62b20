//! Artifact schemas and writers.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::spec::ExperimentSpec;
use super::HarnessError;
use crate::analysis::{BoundsAudit, EnergyReport, Jump};
use crate::solver::Trajectory;

/// One line of a snapshot CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

/// One line of `metrics.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub run: String,
    pub metric: String,
    pub value: f64,
}

impl MetricRow {
    pub fn new(run: &str, metric: &str, value: f64) -> Self {
        Self {
            run: run.to_string(),
            metric: metric.to_string(),
            value,
        }
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the requested snapshots of `traj`, one row per (snapshot, cell),
/// with 17 significant digits.
pub fn emit_snapshot_csv(traj: &Trajectory, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let io = |e: csv::Error| HarnessError::io(path, e);
    w.write_record(["t", "x", "u"]).map_err(io)?;
    for field in traj.snapshots() {
        let t = sci(field.t());
        for (x, u) in field.grid().cell_centers().iter().zip(field.values()) {
            w.write_record([t.as_str(), &sci(*x), &sci(*u)]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_snapshot_csv(path: &Path) -> Result<Vec<SnapshotRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::io(path, e))?;
    r.deserialize()
        .collect::<Result<Vec<SnapshotRow>, _>>()
        .map_err(|e| HarnessError::io(path, e))
}

pub fn emit_metrics(rows: &[MetricRow], path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let io = |e: csv::Error| HarnessError::io(path, e);
    w.write_record(["run", "metric", "value"]).map_err(io)?;
    for row in rows {
        w.write_record([row.run.as_str(), row.metric.as_str(), &sci(row.value)])
            .map_err(io)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| HarnessError::io(path, e))?;
    w.write_all(b"\n").map_err(|e| HarnessError::io(path, e))?;
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn sha256_file(path: &Path) -> Result<String, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: String,
    pub kind: String,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsAudit>,
}

/// `|u_x|` on the inner side of the left interface, one row per ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientTable {
    pub times: Vec<f64>,
    pub rows: Vec<GradientRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientRow {
    pub epsilon: f64,
    /// One entry per report time; `None` where the run failed.
    pub gradients: Vec<Option<f64>>,
}

/// `ln|u_x(t,1+)| ≈ a ln ε + b` at one report time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxRow {
    pub epsilon: f64,
    pub t: f64,
    /// `u_x(1+)`
    pub grad_inner: f64,
    /// `u_x(1−)`
    pub grad_outer: f64,
    /// Discrete flux through the left interface.
    pub flux: f64,
    /// `ε |u_x(1−)| / |u_x(1+)|`
    pub flux_ratio: f64,
}

/// Distance to the Neumann limit on the inner region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub epsilon: f64,
    pub t: f64,
    pub sup_gap: f64,
    pub l2_gap: f64,
    /// `max(u^ε − u_N)`; positive values mean `u^ε` overshoots.
    pub max_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub epsilon: f64,
    pub t: f64,
    pub dx: f64,
    pub expected: Vec<f64>,
    pub found: Vec<Jump>,
    /// Max distance to the ideal step, skipping cells near expected jumps.
    pub step_distance: f64,
    pub excluded_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub epsilon: f64,
    pub delta: f64,
    /// `L²(Q_T)` distance to the sharp-interface run.
    pub l2_qt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeReport {
    pub epsilon: f64,
    pub t: f64,
    /// Minimum distance from the interfaces of the compared cells.
    pub margin: f64,
    pub cells: usize,
    pub max_diff: f64,
}

/// Contents of `summary.json`; sections absent for a preset are omitted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub preset: String,
    pub runs: Vec<RunSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_table: Option<GradientTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fits: Option<Vec<FitReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fluxes: Option<Vec<FluxRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neumann_gaps: Option<Vec<GapRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jumps: Option<JumpReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_distances: Option<Vec<DeltaRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub run: String,
    pub kind: String,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub steps: usize,
    pub newton_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Contents of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub version: String,
    pub preset: String,
    pub spec: ExperimentSpec,
    pub overrides: Vec<String>,
    pub notes: Vec<String>,
    pub runs: Vec<RunEntry>,
    pub files: Vec<FileEntry>,
    pub wall_time_s: f64,
    /// Extra key/value facts (e.g. thread count used).
    pub environment: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn failed_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.status != "ok").count()
    }

    pub fn file(&self, name: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.name == name)
    }
}
