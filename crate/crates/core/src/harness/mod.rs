//! Experiment runner: presets, config files, sweeps and persisted artifacts.
//!
//! A run directory holds one `snapshots_<tag>.csv` per run (`t,x,u`), a flat
//! `metrics.csv` (`run,metric,value`), a `summary.json` and a
//! `manifest.json` listing every emitted file with its SHA-256.

mod output;
mod runner;
mod spec;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use output::{
    emit_metrics, emit_snapshot_csv, read_snapshot_csv, sha256_file, DeltaRow, FileEntry,
    FitReport, FluxRow, GapRow, GradientRow, GradientTable, JumpReport, MetricRow, OdeReport,
    RunEntry, RunManifest, RunSummary, SnapshotRow, Summary,
};
pub use runner::{plan_runs, run_preset, run_spec, RunKind, RunPlan};
pub use spec::{
    epsilon_tag, load_spec, parse_epsilon, parse_spec, validate_spec, ExperimentSpec, GridParams,
    Overrides, Preset, ReactionParams, SpecFile,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("ParseError{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("ValidationError:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("IoError on {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    /// At least one run of the sweep failed; artifacts were still written.
    #[error("{failed} of {total} runs failed (see manifest.json)")]
    RunsFailed {
        failed: usize,
        total: usize,
        manifest: Box<RunManifest>,
    },
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}
