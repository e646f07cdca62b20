//! Experiment descriptions: presets, the TOML config file and validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::coefficients::BistableReaction;
use crate::grid::Grid1D;
use crate::solver::{initial_field, DtSwitch, InitialDatum, TimeStepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig2Snapshots,
    Fig3LimitComparison,
    Fig4GradientDecay,
    Fig5Longtime,
    DeltaConvergence,
    OdeLimitCheck,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2Snapshots,
        Preset::Fig3LimitComparison,
        Preset::Fig4GradientDecay,
        Preset::Fig5Longtime,
        Preset::DeltaConvergence,
        Preset::OdeLimitCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2Snapshots => "fig2_snapshots",
            Preset::Fig3LimitComparison => "fig3_limit_comparison",
            Preset::Fig4GradientDecay => "fig4_gradient_decay",
            Preset::Fig5Longtime => "fig5_longtime",
            Preset::DeltaConvergence => "delta_convergence",
            Preset::OdeLimitCheck => "ode_limit_check",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| HarnessError::Validation(vec![format!("unknown preset `{s}`")]))
    }
}

/// Parses `e-4` / `e^-4` / `exp(-4)` as `e⁻⁴`, otherwise a plain number.
pub fn parse_epsilon(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let exponent = s
        .strip_prefix("e^")
        .or_else(|| s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')))
        .or_else(|| s.strip_prefix('e').filter(|r| r.starts_with('-') || r.starts_with('+')));
    if let Some(e) = exponent {
        return e
            .parse::<f64>()
            .map(f64::exp)
            .map_err(|_| format!("cannot parse epsilon `{s}`"));
    }
    s.parse::<f64>()
        .map_err(|_| format!("cannot parse epsilon `{s}`"))
}

/// `e-j` when `eps = e^{-j}` for an integer `j`, else a compact decimal.
pub fn epsilon_tag(eps: f64) -> String {
    let j = -eps.ln();
    if (j - j.round()).abs() < 1e-9 {
        let j = j.round() as i64;
        if j == 0 {
            "e0".into()
        } else {
            format!("e-{j}")
        }
    } else {
        format!("{eps:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum EpsilonValue {
    Number(f64),
    Text(String),
}

fn de_epsilons<'de, D>(d: D) -> Result<Option<Vec<f64>>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let raw: Option<Vec<EpsilonValue>> = Option::deserialize(d)?;
    raw.map(|v| {
        v.into_iter()
            .map(|e| match e {
                EpsilonValue::Number(x) => Ok(x),
                EpsilonValue::Text(s) => parse_epsilon(&s).map_err(serde::de::Error::custom),
            })
            .collect()
    })
    .transpose()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub length: f64,
    pub n_cells: usize,
    pub interfaces: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionParams {
    pub alpha: f64,
    pub scale: f64,
    pub upper_bound: f64,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// `None` for a custom sweep.
    pub preset: Option<Preset>,
    pub grid: GridParams,
    pub epsilons: Vec<f64>,
    /// Collar widths of the smoothed runs; the sharp profile is always run.
    pub deltas: Vec<f64>,
    pub reaction: ReactionParams,
    pub initial: InitialDatum,
    pub time: TimeStepConfig,
    /// Times at which interface gradients are tabulated and fitted.
    pub report_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub workers: usize,
}

/// Config file contents; every field is optional and mirrors
/// [`ExperimentSpec`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub preset: Option<String>,
    pub grid: Option<GridFile>,
    #[serde(default, deserialize_with = "de_epsilons")]
    pub epsilons: Option<Vec<f64>>,
    pub deltas: Option<Vec<f64>>,
    pub reaction: Option<ReactionFile>,
    pub initial: Option<String>,
    pub time: Option<TimeFile>,
    pub report_times: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub length: Option<f64>,
    pub n_cells: Option<usize>,
    pub interfaces: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionFile {
    pub alpha: Option<f64>,
    pub scale: Option<f64>,
    pub upper_bound: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeFile {
    pub dt: Option<f64>,
    pub theta: Option<f64>,
    pub newton_tol: Option<f64>,
    pub newton_max_iter: Option<usize>,
    pub snapshot_times: Option<Vec<f64>>,
    pub t_end: Option<f64>,
    pub late_dt: Option<DtSwitch>,
    pub record_every: Option<usize>,
}

/// Command-line style overrides applied on top of a preset or config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub epsilons: Option<Vec<f64>>,
    pub n_cells: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl Overrides {
    /// Human-readable `key=value` list for the manifest.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(e) = &self.epsilons {
            let tags: Vec<String> = e.iter().map(|&x| epsilon_tag(x)).collect();
            out.push(format!("epsilons={}", tags.join(",")));
        }
        if let Some(n) = self.n_cells {
            out.push(format!("n_cells={n}"));
        }
        if let Some(dt) = self.dt {
            out.push(format!("dt={dt}"));
        }
        if let Some(t) = self.t_end {
            out.push(format!("t_end={t}"));
        }
        if let Some(w) = self.workers {
            out.push(format!("workers={w}"));
        }
        if let Some(o) = &self.output_dir {
            out.push(format!("output_dir={}", o.display()));
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.describe().is_empty()
    }
}

fn exp_neg(j: i32) -> f64 {
    (-(j as f64)).exp()
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

impl ExperimentSpec {
    /// The built-in parameters of a preset.
    pub fn preset(preset: Preset) -> Self {
        let mut spec = Self::base(Some(preset));
        match preset {
            Preset::Fig2Snapshots | Preset::Fig3LimitComparison => {
                spec.epsilons = [1, 2, 4, 8].map(exp_neg).to_vec();
            }
            Preset::Fig4GradientDecay => {
                spec.epsilons = (0..=8).map(exp_neg).collect();
                spec.report_times = vec![0.01, 0.04, 0.09];
                spec.time.t_end = 0.09;
                spec.time.snapshot_times = vec![0.0, 0.01, 0.04, 0.09];
            }
            Preset::Fig5Longtime => {
                spec.epsilons = vec![exp_neg(16)];
                spec.time.t_end = 100.0;
                spec.time.snapshot_times = vec![0.0, 0.1, 1.0, 10.0, 40.0, 100.0];
                spec.time.late_dt = Some(DtSwitch {
                    after: 1.0,
                    dt: 1e-3,
                });
            }
            Preset::DeltaConvergence => {
                spec.epsilons = vec![exp_neg(4)];
                spec.time.record_every = 10;
            }
            Preset::OdeLimitCheck => {
                spec.epsilons = vec![exp_neg(8)];
            }
        }
        spec.fill_derived_defaults(true);
        spec
    }

    fn base(preset: Option<Preset>) -> Self {
        Self {
            preset,
            grid: GridParams {
                length: 4.0,
                n_cells: 4000,
                interfaces: vec![1.0, 3.0],
            },
            epsilons: vec![],
            deltas: vec![],
            reaction: ReactionParams {
                alpha: 1.0 / 3.0,
                scale: 1.0,
                upper_bound: 1.0,
            },
            initial: InitialDatum::SinQuarter,
            time: TimeStepConfig {
                dt: 1e-4,
                theta: 1.0,
                t_end: 0.1,
                snapshot_times: vec![0.0, 0.1],
                ..TimeStepConfig::default()
            },
            report_times: vec![],
            output_dir: PathBuf::from(match preset {
                Some(p) => format!("runs/{p}"),
                None => "runs/custom".to_string(),
            }),
            workers: default_workers(),
        }
    }

    /// Values that depend on other fields: the collar widths of the δ study
    /// scale with the mesh.
    fn fill_derived_defaults(&mut self, deltas_unset: bool) {
        if self.preset == Some(Preset::DeltaConvergence) && deltas_unset {
            let dx = self.grid.length / self.grid.n_cells as f64;
            self.deltas = vec![8.0 * dx, 4.0 * dx, 2.0 * dx];
        }
    }

    /// Starts from the preset named in `file` (or custom defaults) and applies
    /// every field the file sets.
    pub fn from_file(file: &SpecFile) -> Result<Self, HarnessError> {
        let preset = file.preset.as_deref().map(Preset::from_str).transpose()?;
        let mut spec = match preset {
            Some(p) => Self::preset(p),
            None => Self::base(None),
        };
        if let Some(g) = &file.grid {
            if let Some(v) = g.length {
                spec.grid.length = v;
            }
            if let Some(v) = g.n_cells {
                spec.grid.n_cells = v;
            }
            if let Some(v) = &g.interfaces {
                spec.grid.interfaces = v.clone();
            }
        }
        if let Some(e) = &file.epsilons {
            spec.epsilons = e.clone();
        }
        if let Some(d) = &file.deltas {
            spec.deltas = d.clone();
        }
        if let Some(r) = &file.reaction {
            if let Some(v) = r.alpha {
                spec.reaction.alpha = v;
            }
            if let Some(v) = r.scale {
                spec.reaction.scale = v;
            }
            if let Some(v) = r.upper_bound {
                spec.reaction.upper_bound = v;
            }
        }
        if let Some(s) = &file.initial {
            spec.initial = s
                .parse()
                .map_err(|e: crate::solver::SolverError| HarnessError::Validation(vec![e.to_string()]))?;
        }
        if let Some(t) = &file.time {
            let c = &mut spec.time;
            if let Some(v) = t.dt {
                c.dt = v;
            }
            if let Some(v) = t.theta {
                c.theta = v;
            }
            if let Some(v) = t.newton_tol {
                c.newton_tol = v;
            }
            if let Some(v) = t.newton_max_iter {
                c.newton_max_iter = v;
            }
            if let Some(v) = &t.snapshot_times {
                c.snapshot_times = v.clone();
            }
            if let Some(v) = t.t_end {
                c.t_end = v;
            }
            if t.late_dt.is_some() {
                c.late_dt = t.late_dt;
            }
            if let Some(v) = t.record_every {
                c.record_every = v;
            }
        }
        if let Some(r) = &file.report_times {
            spec.report_times = r.clone();
        }
        if let Some(o) = &file.output_dir {
            spec.output_dir = o.clone();
        }
        if let Some(w) = file.workers {
            spec.workers = w;
        }
        spec.fill_derived_defaults(file.deltas.is_none());
        Ok(spec)
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(e) = &o.epsilons {
            self.epsilons = e.clone();
        }
        if let Some(n) = o.n_cells {
            let deltas_were_default = {
                let mut probe = self.clone();
                probe.fill_derived_defaults(true);
                probe.deltas == self.deltas
            };
            self.grid.n_cells = n;
            self.fill_derived_defaults(deltas_were_default);
        }
        if let Some(dt) = o.dt {
            self.time.dt = dt;
        }
        if let Some(t) = o.t_end {
            self.time.t_end = t;
            self.time.snapshot_times.retain(|&s| s <= t);
            if self.time.snapshot_times.last().is_none_or(|&s| s < t) {
                self.time.snapshot_times.push(t);
            }
            self.report_times.retain(|&s| s <= t);
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = dir.clone();
        }
    }

    pub fn build_grid(&self) -> Result<Arc<Grid1D>, HarnessError> {
        crate::grid::build_grid(self.grid.length, self.grid.n_cells, &self.grid.interfaces)
            .map(Arc::new)
            .map_err(|e| HarnessError::Validation(vec![e.to_string()]))
    }

    pub fn build_reaction(&self) -> Result<BistableReaction, HarnessError> {
        let r = &self.reaction;
        BistableReaction::new(r.alpha, r.scale, r.upper_bound)
            .map_err(|e| HarnessError::Validation(vec![e.to_string()]))
    }
}

/// Every violated constraint of `spec`; never stops at the first one.
pub fn validate_spec(spec: &ExperimentSpec) -> Result<(), HarnessError> {
    let mut errors = Vec::new();

    let grid = match crate::grid::build_grid(
        spec.grid.length,
        spec.grid.n_cells,
        &spec.grid.interfaces,
    ) {
        Ok(g) => Some(Arc::new(g)),
        Err(e) => {
            errors.push(format!("grid: {e}"));
            None
        }
    };
    if let (Some(p), Some(g)) = (spec.preset, &grid) {
        let needs_two = !matches!(p, Preset::OdeLimitCheck | Preset::DeltaConvergence);
        if needs_two && g.interface_faces().len() != 2 {
            errors.push(format!("preset {p} needs exactly two interfaces"));
        }
        if matches!(p, Preset::OdeLimitCheck | Preset::DeltaConvergence) && !g.has_interfaces() {
            errors.push(format!("preset {p} needs interfaces"));
        }
    }

    if spec.epsilons.is_empty() {
        errors.push("at least one epsilon is required".into());
    }
    for &e in &spec.epsilons {
        if !(e > 0.0 && e <= 1.0) {
            errors.push(format!("epsilon must be in (0,1], got {e}"));
        }
    }
    for &d in &spec.deltas {
        if !(d > 0.0) || !d.is_finite() {
            errors.push(format!("delta must be > 0, got {d}"));
        }
    }
    if spec.preset == Some(Preset::DeltaConvergence) && spec.deltas.is_empty() {
        errors.push("delta_convergence needs at least one delta".into());
    }

    let reaction = match BistableReaction::new(
        spec.reaction.alpha,
        spec.reaction.scale,
        spec.reaction.upper_bound,
    ) {
        Ok(r) => match r.validate_bistable(10_000) {
            Ok(_) => Some(r),
            Err(e) => {
                errors.push(format!("reaction: {e}"));
                None
            }
        },
        Err(e) => {
            errors.push(format!("reaction: {e}"));
            None
        }
    };
    if let (Some(g), Some(r)) = (&grid, &reaction) {
        let u0 = initial_field(g.clone(), &spec.initial);
        let m = r.upper_bound();
        if u0.values().iter().any(|&v| !(v >= 0.0 && v <= m)) {
            errors.push(format!(
                "initial datum {} leaves [0, M = {m}] on the grid",
                spec.initial.name()
            ));
        }
    }

    errors.extend(spec.time.violations().into_iter().map(|v| format!("time: {v}")));
    for &t in &spec.report_times {
        if !spec.time.snapshot_times.iter().any(|&s| (s - t).abs() < 1e-12) {
            errors.push(format!("report time {t} is not a snapshot time"));
        }
    }
    if spec.preset == Some(Preset::Fig4GradientDecay) && spec.report_times.is_empty() {
        errors.push("fig4_gradient_decay needs report times".into());
    }
    if spec.workers == 0 {
        errors.push("workers must be >= 1".into());
    }

    if errors.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Validation(errors))
    }
}

/// Parses TOML text into a resolved spec (not yet validated).
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, HarnessError> {
    let file: SpecFile = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        HarnessError::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    ExperimentSpec::from_file(&file)
}

/// Reads and parses a config file.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_syntax() {
        assert_eq!(parse_epsilon("e-4").unwrap(), (-4f64).exp());
        assert_eq!(parse_epsilon("e^-16").unwrap(), (-16f64).exp());
        assert_eq!(parse_epsilon("exp(-2)").unwrap(), (-2f64).exp());
        assert_eq!(parse_epsilon("0.25").unwrap(), 0.25);
        assert_eq!(parse_epsilon("1e-3").unwrap(), 1e-3);
        assert!(parse_epsilon("tiny").is_err());
        assert_eq!(epsilon_tag((-8f64).exp()), "e-8");
        assert_eq!(epsilon_tag(1.0), "e0");
        assert_eq!(epsilon_tag(0.25), "2.5e-1");
    }

    #[test]
    fn preset_contents() {
        let s = ExperimentSpec::preset(Preset::Fig4GradientDecay);
        assert_eq!(s.epsilons.len(), 9);
        assert_eq!(s.report_times, vec![0.01, 0.04, 0.09]);
        let s = ExperimentSpec::preset(Preset::DeltaConvergence);
        assert_eq!(s.deltas.len(), 3);
        assert!((s.deltas[0] - 0.008).abs() < 1e-15);
        for p in Preset::ALL {
            validate_spec(&ExperimentSpec::preset(p)).unwrap();
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
    }

    #[test]
    fn minimal_file_uses_preset_defaults() {
        let spec = parse_spec("preset = \"fig2_snapshots\"\n").unwrap();
        assert_eq!(spec, ExperimentSpec::preset(Preset::Fig2Snapshots));
    }

    #[test]
    fn zero_epsilon_is_reported() {
        let spec = parse_spec("epsilons = [0.0, \"e-1\"]\n").unwrap();
        match validate_spec(&spec) {
            Err(HarnessError::Validation(v)) => {
                assert!(v.iter().any(|m| m.contains("epsilon must be in (0,1]")), "{v:?}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_violations_are_listed() {
        let text = r#"
epsilons = [0.0, 2.0]
workers = 0
[grid]
n_cells = 10
interfaces = [1.05, 3.0]
[time]
dt = -1.0
theta = 0.1
"#;
        let spec = parse_spec(text).unwrap();
        let Err(HarnessError::Validation(v)) = validate_spec(&spec) else {
            panic!("expected validation errors");
        };
        assert!(v.iter().any(|m| m.contains("InterfaceNotOnFace")), "{v:?}");
        assert!(v.iter().filter(|m| m.contains("epsilon")).count() == 2);
        assert!(v.iter().any(|m| m.contains("dt must be")));
        assert!(v.iter().any(|m| m.contains("theta")));
        assert!(v.iter().any(|m| m.contains("workers")));
    }

    #[test]
    fn parse_errors_carry_a_line() {
        let err = parse_spec("preset = \"fig2_snapshots\"\n[grid]\nlenght = 3.0\n").unwrap_err();
        match err {
            HarnessError::Parse { line, message } => {
                assert_eq!(line, Some(3));
                assert!(message.contains("lenght"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overrides_rescale_default_deltas() {
        let mut s = ExperimentSpec::preset(Preset::DeltaConvergence);
        s.apply_overrides(&Overrides {
            n_cells: Some(400),
            ..Overrides::default()
        });
        assert!((s.deltas[0] - 0.08).abs() < 1e-15);
        let mut s = ExperimentSpec::preset(Preset::Fig5Longtime);
        s.apply_overrides(&Overrides {
            t_end: Some(5.0),
            ..Overrides::default()
        });
        assert_eq!(s.time.snapshot_times, vec![0.0, 0.1, 1.0, 5.0]);
        validate_spec(&s).unwrap();
    }
}
