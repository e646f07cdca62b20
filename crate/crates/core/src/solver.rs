//! Finite-volume discretisation of `u_t = (D u_x)_x + f(u)` with zero-flux
//! ends, advanced by an implicit θ-scheme with Newton iterations.
//!
//! Cell `i` covers `[x_i, x_{i+1}]`; the flux through interior face `i + 1/2`
//! is `D_face · (u_{i+1} − u_i) / dx` and both boundary faces carry no flux.
//! Each Newton iteration solves one tridiagonal system by the Thomas
//! algorithm.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{BistableReaction, DiffusivityProfile, FaceAveraging};
use crate::grid::Grid1D;

/// Slack allowed on `0 ≤ u ≤ M` before a state counts as a violation.
pub const BOUND_SLACK: f64 = 1e-8;

/// Pivots smaller than this abort the Thomas sweep.
pub const PIVOT_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("DimensionMismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("SingularSystem: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },
    #[error("NewtonDiverged at t = {t}: residual {residual:e} after {iterations} iterations (dt too large?)")]
    NewtonDiverged {
        t: f64,
        iterations: usize,
        residual: f64,
    },
    #[error("InvalidInitialData: {0}")]
    InvalidInitialData(String),
    #[error("BoundViolation at t = {t}: value {value} outside [0, {upper}]")]
    BoundViolation { t: f64, value: f64, upper: f64 },
    #[error("field contains a non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("UnknownDatum: {0}")]
    UnknownDatum(String),
    #[error("GridMismatch: profile and grid describe different meshes")]
    GridMismatch,
}

/// Cell averages of the solution at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid1D>,
    values: Vec<f64>,
    t: f64,
}

impl Field {
    pub fn new(grid: Arc<Grid1D>, values: Vec<f64>, t: f64) -> Result<Self, SolverError> {
        if values.len() != grid.n_cells() {
            return Err(SolverError::DimensionMismatch {
                expected: grid.n_cells(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite { t });
        }
        Ok(Self { grid, values, t })
    }

    pub fn from_fn(grid: Arc<Grid1D>, t: f64, g: impl Fn(f64) -> f64) -> Self {
        let values = grid.cell_centers().iter().map(|&x| g(x)).collect();
        Self { grid, values, t }
    }

    pub fn constant(grid: Arc<Grid1D>, c: f64) -> Self {
        let n = grid.n_cells();
        Self {
            grid,
            values: vec![c; n],
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ u_i dx`
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// The values on a cell range, re-based onto the matching subgrid.
    pub fn restrict(&self, cells: std::ops::Range<usize>) -> Result<Field, SolverError> {
        let sub = self
            .grid
            .subgrid(cells.clone())
            .map_err(|e| SolverError::InvalidConfig(e.to_string()))?;
        Ok(Field {
            grid: Arc::new(sub),
            values: self.values[cells].to_vec(),
            t: self.t,
        })
    }
}

/// Symmetric tridiagonal matrix of the discrete operator `(D u_x)_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    /// `sub[i]` couples row `i + 1` to column `i`.
    pub sub: Vec<f64>,
    pub main: Vec<f64>,
    /// `sup[i]` couples row `i` to column `i + 1`.
    pub sup: Vec<f64>,
    pub dx: f64,
}

impl TridiagonalOperator {
    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let n = self.main.len();
        if n == 1 {
            out[0] = self.main[0] * u[0];
            return;
        }
        out[0] = self.main[0] * u[0] + self.sup[0] * u[1];
        for i in 1..n - 1 {
            out[i] = self.sub[i - 1] * u[i - 1] + self.main[i] * u[i] + self.sup[i] * u[i + 1];
        }
        out[n - 1] = self.sub[n - 2] * u[n - 2] + self.main[n - 1] * u[n - 1];
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        self.apply_into(u, &mut out);
        out
    }
}

/// Assembles the zero-flux diffusion operator from face diffusivities.
pub fn assemble_diffusion(
    grid: &Grid1D,
    face_d: &[f64],
) -> Result<TridiagonalOperator, SolverError> {
    let n = grid.n_cells();
    if face_d.len() != n + 1 {
        return Err(SolverError::DimensionMismatch {
            expected: n + 1,
            got: face_d.len(),
        });
    }
    let dx = grid.dx();
    let inv = 1.0 / (dx * dx);
    // Interior face j (1..n) couples cells j-1 and j; faces 0 and n are walls.
    let coupling: Vec<f64> = face_d[1..n].iter().map(|d| d * inv).collect();
    let mut main = vec![0.0; n];
    for (j, c) in coupling.iter().enumerate() {
        main[j] -= c;
        main[j + 1] -= c;
    }
    Ok(TridiagonalOperator {
        sub: coupling.clone(),
        main,
        sup: coupling,
        dx,
    })
}

/// Solves a tridiagonal system. `sub` and `sup` have one entry fewer than
/// `main`.
pub fn thomas_solve(
    sub: &[f64],
    main: &[f64],
    sup: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, SolverError> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; main.len()];
    thomas_solve_in_place(sub, main, sup, &mut x, &mut scratch)?;
    Ok(x)
}

/// In-place Thomas sweep: `x` holds the right-hand side on entry and the
/// solution on exit; `scratch` must have the same length.
pub fn thomas_solve_in_place(
    sub: &[f64],
    main: &[f64],
    sup: &[f64],
    x: &mut [f64],
    scratch: &mut [f64],
) -> Result<(), SolverError> {
    let n = main.len();
    if x.len() != n || scratch.len() != n {
        return Err(SolverError::DimensionMismatch {
            expected: n,
            got: x.len().min(scratch.len()),
        });
    }
    if n == 0 {
        return Ok(());
    }
    if sub.len() + 1 != n || sup.len() + 1 != n {
        return Err(SolverError::DimensionMismatch {
            expected: n - 1,
            got: sub.len().min(sup.len()),
        });
    }
    let mut pivot = main[0];
    if pivot.abs() < PIVOT_FLOOR {
        return Err(SolverError::SingularSystem { row: 0, pivot });
    }
    x[0] /= pivot;
    for i in 1..n {
        scratch[i - 1] = sup[i - 1] / pivot;
        pivot = main[i] - sub[i - 1] * scratch[i - 1];
        if pivot.abs() < PIVOT_FLOOR || !pivot.is_finite() {
            return Err(SolverError::SingularSystem { row: i, pivot });
        }
        x[i] = (x[i] - sub[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= scratch[i] * x[i + 1];
    }
    Ok(())
}

/// A switch to a different time step once `t` passes `after`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtSwitch {
    pub after: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimeStepConfig {
    pub dt: f64,
    pub theta: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub snapshot_times: Vec<f64>,
    pub t_end: f64,
    /// Optional coarser step used after a given time.
    pub late_dt: Option<DtSwitch>,
    /// Also record every k-th step (0 = only the snapshot times).
    pub record_every: usize,
}

impl Default for TimeStepConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            theta: 1.0,
            newton_tol: 1e-10,
            newton_max_iter: 25,
            snapshot_times: vec![0.0, 0.1],
            t_end: 0.1,
            late_dt: None,
            record_every: 0,
        }
    }
}

impl TimeStepConfig {
    pub fn new(dt: f64, theta: f64, t_end: f64, snapshot_times: Vec<f64>) -> Self {
        Self {
            dt,
            theta,
            t_end,
            snapshot_times,
            ..Self::default()
        }
    }

    /// Every violated constraint, in a stable order.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            v.push(format!("dt must be > 0, got {}", self.dt));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            v.push(format!("theta must be in [0.5,1], got {}", self.theta));
        }
        if !(self.newton_tol > 0.0) {
            v.push(format!("newton_tol must be > 0, got {}", self.newton_tol));
        }
        if self.newton_max_iter == 0 {
            v.push("newton_max_iter must be >= 1".into());
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            v.push(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if self
            .snapshot_times
            .iter()
            .any(|&t| !(t >= 0.0 && t <= self.t_end))
        {
            v.push(format!(
                "snapshot times must lie in [0, t_end = {}]",
                self.t_end
            ));
        }
        if self.snapshot_times.windows(2).any(|w| !(w[0] < w[1])) {
            v.push("snapshot times must be strictly increasing".into());
        }
        if let Some(s) = self.late_dt {
            if !(s.dt > 0.0) || !(s.after >= 0.0) {
                v.push("late_dt needs dt > 0 and after >= 0".into());
            }
        }
        v
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SolverError::InvalidConfig(v.join("; ")))
        }
    }

    fn dt_at(&self, t: f64) -> f64 {
        match self.late_dt {
            Some(s) if t >= s.after - 1e-12 * s.after.max(1.0) => s.dt,
            _ => self.dt,
        }
    }
}

/// Grid, coefficients and configuration a trajectory was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub reaction_scale: f64,
    pub upper_bound: f64,
    pub origin: f64,
    pub length: f64,
    pub n_cells: usize,
    pub interfaces: Vec<f64>,
    pub config: TimeStepConfig,
    pub steps: usize,
    pub newton_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    fields: Vec<Field>,
    /// Indices into `fields` of the requested snapshot times.
    snapshots: Vec<usize>,
    pub meta: RunMetadata,
}

impl Trajectory {
    /// Builds a trajectory where every field is a requested snapshot.
    pub fn from_fields(fields: Vec<Field>, meta: RunMetadata) -> Result<Self, SolverError> {
        if fields.is_empty() {
            return Err(SolverError::InvalidConfig("trajectory needs at least one field".into()));
        }
        if fields.windows(2).any(|w| !(w[0].t < w[1].t)) {
            return Err(SolverError::InvalidConfig(
                "snapshot times must be strictly increasing".into(),
            ));
        }
        let snapshots = (0..fields.len()).collect();
        Ok(Self {
            fields,
            snapshots,
            meta,
        })
    }

    /// Every recorded field, including the dense records.
    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    /// Only the fields at requested snapshot times.
    pub fn snapshots(&self) -> impl Iterator<Item = &Field> {
        self.snapshots.iter().map(move |&i| &self.fields[i])
    }

    pub fn initial(&self) -> &Field {
        &self.fields[0]
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("trajectory is nonempty")
    }

    /// The recorded field whose time is within `1e-9` of `t`.
    pub fn at(&self, t: f64) -> Option<&Field> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.fields.iter().find(|f| (f.t - t).abs() <= tol)
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        self.fields[0].grid()
    }
}

/// Named initial data. Serialised as the same string [`FromStr`] accepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitialDatum {
    /// `sin(π x / 4)`
    SinQuarter,
    Constant(f64),
    /// Piecewise-linear interpolation of `(x, u)` pairs, held constant beyond
    /// the first and last points.
    Table(Vec<(f64, f64)>),
}

impl InitialDatum {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialDatum::SinQuarter => (PI * x / 4.0).sin(),
            InitialDatum::Constant(c) => *c,
            InitialDatum::Table(points) => interpolate(points, x),
        }
    }

    pub fn name(&self) -> String {
        match self {
            InitialDatum::SinQuarter => "sin_quarter".into(),
            InitialDatum::Constant(c) => format!("constant({c})"),
            InitialDatum::Table(p) => {
                let body: Vec<String> = p.iter().map(|(x, u)| format!("{x}:{u}")).collect();
                format!("table({})", body.join(","))
            }
        }
    }
}

impl From<InitialDatum> for String {
    fn from(d: InitialDatum) -> String {
        d.name()
    }
}

impl TryFrom<String> for InitialDatum {
    type Error = SolverError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for InitialDatum {
    type Err = SolverError;

    /// Accepts `sin_quarter`, `constant(c)` and `table(x:u,x:u,...)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || SolverError::UnknownDatum(s.to_string());
        if s == "sin_quarter" {
            return Ok(InitialDatum::SinQuarter);
        }
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(c) = inner("constant") {
            return c.trim().parse().map(InitialDatum::Constant).map_err(|_| unknown());
        }
        if let Some(body) = inner("table") {
            let mut points = Vec::new();
            for pair in body.split(',') {
                let (x, u) = pair.split_once(':').ok_or_else(unknown)?;
                let x: f64 = x.trim().parse().map_err(|_| unknown())?;
                let u: f64 = u.trim().parse().map_err(|_| unknown())?;
                points.push((x, u));
            }
            if points.is_empty() || points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                return Err(unknown());
            }
            return Ok(InitialDatum::Table(points));
        }
        Err(unknown())
    }
}

fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    match points {
        [] => 0.0,
        [(_, u)] => *u,
        _ => {
            if x <= points[0].0 {
                return points[0].1;
            }
            let last = points[points.len() - 1];
            if x >= last.0 {
                return last.1;
            }
            let k = points.partition_point(|p| p.0 <= x);
            let (x0, u0) = points[k - 1];
            let (x1, u1) = points[k];
            u0 + (u1 - u0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Samples `datum` at the cell centres.
pub fn initial_field(grid: Arc<Grid1D>, datum: &InitialDatum) -> Field {
    Field::from_fn(grid, 0.0, |x| datum.eval(x))
}

/// Reusable buffers for Newton iterations on one grid.
#[derive(Debug, Clone)]
pub struct ThetaStepper {
    explicit: Vec<f64>,
    lu: Vec<f64>,
    residual: Vec<f64>,
    diag: Vec<f64>,
    off: Vec<f64>,
    scratch: Vec<f64>,
    pub newton_iterations: usize,
}

impl ThetaStepper {
    pub fn new(n: usize) -> Self {
        Self {
            explicit: vec![0.0; n],
            lu: vec![0.0; n],
            residual: vec![0.0; n],
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
            scratch: vec![0.0; n],
            newton_iterations: 0,
        }
    }

    /// Advances `u` (at time `t`) by `h` in place.
    ///
    /// Solves `v − hθ(Lv + f(v)) = u + h(1−θ)(Lu + f(u))` by Newton with
    /// Jacobian `I − hθ(L + diag f'(v))`, starting from `v = u`.
    pub fn step(
        &mut self,
        u: &mut [f64],
        t: f64,
        h: f64,
        op: &TridiagonalOperator,
        r: &BistableReaction,
        cfg: &TimeStepConfig,
    ) -> Result<(), SolverError> {
        let n = u.len();
        if n != op.len() {
            return Err(SolverError::DimensionMismatch {
                expected: op.len(),
                got: n,
            });
        }
        let theta = cfg.theta;
        let explicit_w = h * (1.0 - theta);
        if explicit_w != 0.0 {
            op.apply_into(u, &mut self.lu);
            for i in 0..n {
                self.explicit[i] = u[i] + explicit_w * (self.lu[i] + r.eval(u[i]));
            }
        } else {
            self.explicit.copy_from_slice(u);
        }
        let implicit_w = h * theta;
        let mut iterations = 0;
        loop {
            op.apply_into(u, &mut self.lu);
            let mut res_max: f64 = 0.0;
            for i in 0..n {
                let res = u[i] - implicit_w * (self.lu[i] + r.eval(u[i])) - self.explicit[i];
                self.residual[i] = -res;
                res_max = res_max.max(res.abs());
            }
            if !res_max.is_finite() {
                return Err(SolverError::NewtonDiverged {
                    t,
                    iterations,
                    residual: res_max,
                });
            }
            if res_max < cfg.newton_tol {
                break;
            }
            if iterations == cfg.newton_max_iter {
                return Err(SolverError::NewtonDiverged {
                    t,
                    iterations,
                    residual: res_max,
                });
            }
            for i in 0..n {
                self.diag[i] = 1.0 - implicit_w * (op.main[i] + r.deriv(u[i]));
            }
            for i in 0..n - 1 {
                self.off[i] = -implicit_w * op.sup[i];
            }
            thomas_solve_in_place(
                &self.off,
                &self.diag,
                &self.off,
                &mut self.residual,
                &mut self.scratch,
            )?;
            for i in 0..n {
                u[i] += self.residual[i];
            }
            iterations += 1;
        }
        self.newton_iterations += iterations;
        Ok(())
    }
}

/// One θ-step of size `cfg.dt` from `state`.
pub fn step_theta(
    state: &Field,
    op: &TridiagonalOperator,
    r: &BistableReaction,
    cfg: &TimeStepConfig,
) -> Result<Field, SolverError> {
    let mut values = state.values.clone();
    let mut stepper = ThetaStepper::new(values.len());
    stepper.step(&mut values, state.t, cfg.dt, op, r, cfg)?;
    Ok(Field {
        grid: state.grid.clone(),
        values,
        t: state.t + cfg.dt,
    })
}

fn check_bounds(values: &[f64], t: f64, upper: f64) -> Result<(), SolverError> {
    for &v in values {
        if !v.is_finite() {
            return Err(SolverError::NonFinite { t });
        }
        if v < -BOUND_SLACK || v > upper + BOUND_SLACK {
            return Err(SolverError::BoundViolation { t, value: v, upper });
        }
    }
    Ok(())
}

/// Solves with harmonic face averaging and no observer.
pub fn solve(
    grid: &Arc<Grid1D>,
    profile: &DiffusivityProfile,
    r: &BistableReaction,
    u0: &Field,
    cfg: &TimeStepConfig,
) -> Result<Trajectory, SolverError> {
    solve_observed(grid, profile, r, u0, cfg, FaceAveraging::Harmonic, |_| {})
}

/// Integrates to `cfg.t_end`, landing exactly on every snapshot time.
///
/// `observer` sees the initial field and the state after every step, in
/// order; it is the hook for diagnostics that need every time level without
/// storing them.
pub fn solve_observed(
    grid: &Arc<Grid1D>,
    profile: &DiffusivityProfile,
    r: &BistableReaction,
    u0: &Field,
    cfg: &TimeStepConfig,
    averaging: FaceAveraging,
    mut observer: impl FnMut(&Field),
) -> Result<Trajectory, SolverError> {
    cfg.validate()?;
    if !grid.same_geometry(profile.grid()) || !grid.same_geometry(u0.grid()) {
        return Err(SolverError::GridMismatch);
    }
    let upper = r.upper_bound();
    if let Some(&bad) = u0.values.iter().find(|&&v| !(v >= 0.0 && v <= upper)) {
        return Err(SolverError::InvalidInitialData(format!(
            "initial value {bad} outside [0, {upper}]"
        )));
    }

    let op = assemble_diffusion(grid, &profile.face_diffusivity(averaging))?;
    let mut stepper = ThetaStepper::new(grid.n_cells());

    let mut targets: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .collect();
    if targets.last().is_none_or(|&t| t < cfg.t_end) {
        targets.push(cfg.t_end);
    }
    let requested = |t: f64| cfg.snapshot_times.iter().any(|&s| s == t);

    let mut current = Field {
        grid: grid.clone(),
        values: u0.values.clone(),
        t: 0.0,
    };
    observer(&current);
    let mut fields = vec![current.clone()];
    let mut snapshots = vec![0];
    let mut steps = 0usize;

    for target in targets {
        // Split at the step-size switch so each piece has a uniform step.
        let mut pieces = Vec::with_capacity(2);
        if let Some(s) = cfg.late_dt {
            if s.after > current.t && s.after < target {
                pieces.push(s.after);
            }
        }
        pieces.push(target);
        for piece_end in pieces {
            let start = current.t;
            let h = cfg.dt_at(start);
            let span = piece_end - start;
            if span <= 0.0 {
                continue;
            }
            let n_full = (span / h + 1e-9).floor() as usize;
            let remainder = span - n_full as f64 * h;
            let n_steps = if remainder > 1e-9 * h { n_full + 1 } else { n_full };
            for k in 1..=n_steps {
                let t_next = if k == n_steps {
                    piece_end
                } else {
                    start + k as f64 * h
                };
                let step = t_next - current.t;
                stepper.step(&mut current.values, current.t, step, &op, r, cfg)?;
                current.t = t_next;
                check_bounds(&current.values, current.t, upper)?;
                steps += 1;
                observer(&current);
                let is_target = k == n_steps && piece_end == target && requested(target);
                if is_target {
                    snapshots.push(fields.len());
                    fields.push(current.clone());
                } else if cfg.record_every > 0 && steps % cfg.record_every == 0 {
                    fields.push(current.clone());
                }
            }
        }
    }
    // A run whose final time was not requested still ends with its last state.
    if fields.last().is_some_and(|f| f.t < current.t) {
        fields.push(current.clone());
    }

    let meta = RunMetadata {
        epsilon: profile.epsilon(),
        delta: profile.delta(),
        alpha: r.alpha(),
        reaction_scale: r.scale(),
        upper_bound: upper,
        origin: grid.origin(),
        length: grid.length(),
        n_cells: grid.n_cells(),
        interfaces: grid.interface_positions(),
        config: cfg.clone(),
        steps,
        newton_iterations: stepper.newton_iterations,
    };
    Ok(Trajectory {
        fields,
        snapshots,
        meta,
    })
}
