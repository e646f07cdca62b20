//! Diagnostics computed from solver output.
//!
//! Space integrals use the midpoint rule on cell averages (and face values for
//! gradients); time integrals use the trapezoid rule over recorded fields.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{BistableReaction, DiffusivityProfile, FaceAveraging};
use crate::grid::{Grid1D, InterfaceSide, Region};
use crate::solver::{Field, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("GridMismatch: {0}")]
    GridMismatch(String),
    #[error("TooFewCells: need 3 cells on the requested side, found {0}")]
    TooFewCells(usize),
    #[error("the grid has no such interface")]
    NoInterface,
    #[error("NonPositiveInput: {0}")]
    NonPositiveInput(String),
    #[error("InsufficientSnapshots: need at least 2 recorded fields, got {0}")]
    InsufficientSnapshots(usize),
    #[error("NoBracket: g({lo}) and g({hi}) lie on the same side of the level")]
    NoBracket { lo: f64, hi: f64 },
}

/// Which cells an integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegionSelector {
    #[default]
    All,
    Inner,
    Outer,
}

impl RegionSelector {
    fn contains(self, grid: &Grid1D, cell: usize) -> bool {
        match self {
            RegionSelector::All => true,
            RegionSelector::Inner => grid.cell_region(cell) == Region::Inner,
            RegionSelector::Outer => grid.cell_region(cell) == Region::Outer,
        }
    }
}

fn check_same_grid(a: &Field, b: &Field) -> Result<(), AnalysisError> {
    if a.grid().same_geometry(b.grid()) {
        Ok(())
    } else {
        Err(AnalysisError::GridMismatch(
            "fields live on different grids".into(),
        ))
    }
}

fn sq_diff_integral(u: &Field, v: &Field, region: RegionSelector) -> f64 {
    let g = u.grid();
    let s: f64 = u
        .values()
        .iter()
        .zip(v.values())
        .enumerate()
        .filter(|(i, _)| region.contains(g, *i))
        .map(|(_, (a, b))| (a - b) * (a - b))
        .sum();
    s * g.dx()
}

/// `‖u − v‖` in L² over the selected region.
pub fn l2_space(u: &Field, v: &Field, region: RegionSelector) -> Result<f64, AnalysisError> {
    check_same_grid(u, v)?;
    Ok(sq_diff_integral(u, v, region).sqrt())
}

/// Max-norm of `u − v` over the selected region.
pub fn sup_distance(u: &Field, v: &Field, region: RegionSelector) -> Result<f64, AnalysisError> {
    check_same_grid(u, v)?;
    let g = u.grid();
    Ok(u.values()
        .iter()
        .zip(v.values())
        .enumerate()
        .filter(|(i, _)| region.contains(g, *i))
        .map(|(_, (a, b))| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Space-time L² distance over every recorded field; both trajectories must
/// have been recorded at the same times.
pub fn l2_space_time(
    a: &Trajectory,
    b: &Trajectory,
    region: RegionSelector,
) -> Result<f64, AnalysisError> {
    let (fa, fb) = (a.fields(), b.fields());
    if fa.len() != fb.len() {
        return Err(AnalysisError::GridMismatch(format!(
            "{} vs {} recorded fields",
            fa.len(),
            fb.len()
        )));
    }
    if fa.len() < 2 {
        return Err(AnalysisError::InsufficientSnapshots(fa.len()));
    }
    let mut prev: Option<(f64, f64)> = None;
    let mut total = 0.0;
    for (u, v) in fa.iter().zip(fb) {
        if (u.t() - v.t()).abs() > 1e-12 * u.t().abs().max(1.0) {
            return Err(AnalysisError::GridMismatch(format!(
                "snapshot times differ: {} vs {}",
                u.t(),
                v.t()
            )));
        }
        check_same_grid(u, v)?;
        let val = sq_diff_integral(u, v, region);
        if let Some((t0, v0)) = prev {
            total += 0.5 * (u.t() - t0) * (v0 + val);
        }
        prev = Some((u.t(), val));
    }
    Ok(total.sqrt())
}

/// Side of an interface from which a one-sided derivative is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientSide {
    InnerSide,
    OuterSide,
}

/// One-sided `u_x` at an interface face from the three nearest cell centres
/// on the requested side (second order, exact on quadratics). The sign is
/// that of `du/dx`.
pub fn interface_gradient(
    state: &Field,
    which: InterfaceSide,
    side: GradientSide,
) -> Result<f64, AnalysisError> {
    let g = state.grid();
    let face = g.interface_face(which).ok_or(AnalysisError::NoInterface)?;
    let inner = g.inner_cells();
    // Cells to the right of `face` start at index `face`.
    let look_right = matches!(
        (which, side),
        (InterfaceSide::Left, GradientSide::InnerSide) | (InterfaceSide::Right, GradientSide::OuterSide)
    );
    let available = match (which, side) {
        (_, GradientSide::InnerSide) => inner.len(),
        (InterfaceSide::Left, GradientSide::OuterSide) => face,
        (InterfaceSide::Right, GradientSide::OuterSide) => g.n_cells() - face,
    };
    if available < 3 {
        return Err(AnalysisError::TooFewCells(available));
    }
    let u = state.values();
    let h = g.dx();
    Ok(if look_right {
        (-2.0 * u[face] + 3.0 * u[face + 1] - u[face + 2]) / h
    } else {
        (2.0 * u[face - 1] - 3.0 * u[face - 2] + u[face - 3]) / h
    })
}

/// Diffusive flux `D_face (u_i − u_{i−1}) / dx` through interface `which`.
///
/// The finite-volume scheme uses this single value for both adjacent cells,
/// so the flux is continuous across the interface by construction.
pub fn interface_flux(
    state: &Field,
    profile: &DiffusivityProfile,
    which: InterfaceSide,
) -> Result<f64, AnalysisError> {
    let g = state.grid();
    let face = g.interface_face(which).ok_or(AnalysisError::NoInterface)?;
    let d = profile.face_diffusivity(FaceAveraging::Harmonic)[face];
    let u = state.values();
    Ok(d * (u[face] - u[face - 1]) / g.dx())
}

/// Least-squares line `ln value = a ln ε + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    /// RMS of the fit residuals in log space.
    pub residual: f64,
}

impl PowerLawFit {
    pub fn predict(&self, eps: f64) -> f64 {
        (self.a * eps.ln() + self.b).exp()
    }
}

pub fn fit_power_law(eps: &[f64], values: &[f64]) -> Result<PowerLawFit, AnalysisError> {
    if eps.len() != values.len() {
        return Err(AnalysisError::NonPositiveInput(format!(
            "{} abscissae vs {} values",
            eps.len(),
            values.len()
        )));
    }
    if eps.len() < 3 {
        return Err(AnalysisError::NonPositiveInput(format!(
            "need at least 3 points, got {}",
            eps.len()
        )));
    }
    if let Some(bad) = eps.iter().chain(values).find(|&&v| !(v > 0.0) || !v.is_finite()) {
        return Err(AnalysisError::NonPositiveInput(format!("{bad} is not > 0")));
    }
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::NonPositiveInput(
            "all abscissae are equal".into(),
        ));
    }
    let a = sxy / sxx;
    let b = my - a * mx;
    let ss: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| {
            let r = yi - (a * xi + b);
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        a,
        b,
        residual: (ss / n).sqrt(),
    })
}

/// Terms of the energy identity
/// `½‖u(T)‖² + ∫∫ D|u_x|² = ½‖u₀‖² + ∫∫ f(u) u` and the a priori bound on
/// the inner gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `∫∫_{inner} |u_x|²`
    pub bound_inner: f64,
    /// `½|Ω|M² + M M_f |Ω| T`
    pub c1_bound: f64,
    pub identity_residual: f64,
    pub horizon: f64,
}

impl EnergyReport {
    pub fn relative_residual(&self) -> f64 {
        self.identity_residual / self.lhs.abs().max(self.rhs.abs())
    }

    pub fn bound_holds(&self) -> bool {
        self.bound_inner <= self.c1_bound
    }
}

/// Streaming accumulator for [`EnergyReport`]; feed it fields in time order.
#[derive(Debug, Clone)]
pub struct EnergyAccumulator {
    face_d: Vec<f64>,
    inner_faces: std::ops::Range<usize>,
    reaction: BistableReaction,
    length: f64,
    first: Option<(f64, f64)>,
    last: Option<Sample>,
    dissipation: f64,
    production: f64,
    inner_grad: f64,
    count: usize,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    half_norm: f64,
    dissipation: f64,
    production: f64,
    inner_grad: f64,
}

impl EnergyAccumulator {
    pub fn new(profile: &DiffusivityProfile, reaction: &BistableReaction) -> Self {
        let g = profile.grid();
        let cells = g.inner_cells();
        // Faces strictly between two inner cells.
        let inner_faces = if cells.len() >= 2 {
            cells.start + 1..cells.end
        } else {
            0..0
        };
        Self {
            face_d: profile.face_diffusivity(FaceAveraging::Harmonic),
            inner_faces,
            reaction: *reaction,
            length: g.length(),
            first: None,
            last: None,
            dissipation: 0.0,
            production: 0.0,
            inner_grad: 0.0,
            count: 0,
        }
    }

    fn sample(&self, field: &Field) -> Sample {
        let u = field.values();
        let dx = field.grid().dx();
        let half_norm = 0.5 * u.iter().map(|v| v * v).sum::<f64>() * dx;
        let production = u.iter().map(|&v| self.reaction.eval(v) * v).sum::<f64>() * dx;
        let mut dissipation = 0.0;
        let mut inner_grad = 0.0;
        for j in 1..u.len() {
            let grad = (u[j] - u[j - 1]) / dx;
            let g2 = grad * grad * dx;
            dissipation += self.face_d[j] * g2;
            if self.inner_faces.contains(&j) {
                inner_grad += g2;
            }
        }
        Sample {
            t: field.t(),
            half_norm,
            dissipation,
            production,
            inner_grad,
        }
    }

    pub fn push(&mut self, field: &Field) {
        let s = self.sample(field);
        if let Some(p) = self.last {
            let h = 0.5 * (s.t - p.t);
            self.dissipation += h * (p.dissipation + s.dissipation);
            self.production += h * (p.production + s.production);
            self.inner_grad += h * (p.inner_grad + s.inner_grad);
        } else {
            self.first = Some((s.t, s.half_norm));
        }
        self.last = Some(s);
        self.count += 1;
    }

    pub fn finish(&self) -> Result<EnergyReport, AnalysisError> {
        let (Some((t0, half0)), Some(last)) = (self.first, self.last) else {
            return Err(AnalysisError::InsufficientSnapshots(self.count));
        };
        if self.count < 2 {
            return Err(AnalysisError::InsufficientSnapshots(self.count));
        }
        let m = self.reaction.upper_bound();
        let horizon = last.t - t0;
        let lhs = last.half_norm + self.dissipation;
        let rhs = half0 + self.production;
        Ok(EnergyReport {
            lhs,
            rhs,
            bound_inner: self.inner_grad,
            c1_bound: 0.5 * self.length * m * m + m * self.reaction.m_f() * self.length * horizon,
            identity_residual: (lhs - rhs).abs(),
            horizon,
        })
    }
}

/// Energy identity terms over every recorded field of `traj`.
pub fn energy_report(
    traj: &Trajectory,
    profile: &DiffusivityProfile,
    r: &BistableReaction,
) -> Result<EnergyReport, AnalysisError> {
    if !traj.grid().same_geometry(profile.grid()) {
        return Err(AnalysisError::GridMismatch(
            "profile and trajectory grids differ".into(),
        ));
    }
    let mut acc = EnergyAccumulator::new(profile, r);
    for f in traj.fields() {
        acc.push(f);
    }
    acc.finish()
}

/// Spatial factor of a test function, in the local coordinate
/// `ξ = x − origin ∈ (0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceFactor {
    One,
    X,
    X2,
    /// `cos(kπξ/L)`
    Cos(u32),
}

/// Temporal factor of a test function on `(0, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeFactor {
    One,
    T,
    /// `cos(kπt/T)`
    Cos(u32),
}

impl SpaceFactor {
    fn value(self, xi: f64, len: f64) -> f64 {
        match self {
            SpaceFactor::One => 1.0,
            SpaceFactor::X => xi,
            SpaceFactor::X2 => xi * xi,
            SpaceFactor::Cos(k) => (k as f64 * PI * xi / len).cos(),
        }
    }

    fn deriv(self, xi: f64, len: f64) -> f64 {
        match self {
            SpaceFactor::One => 0.0,
            SpaceFactor::X => 1.0,
            SpaceFactor::X2 => 2.0 * xi,
            SpaceFactor::Cos(k) => {
                let w = k as f64 * PI / len;
                -w * (w * xi).sin()
            }
        }
    }
}

impl TimeFactor {
    fn value(self, t: f64, horizon: f64) -> f64 {
        match self {
            TimeFactor::One => 1.0,
            TimeFactor::T => t,
            TimeFactor::Cos(k) => (k as f64 * PI * t / horizon).cos(),
        }
    }

    fn deriv(self, t: f64, horizon: f64) -> f64 {
        match self {
            TimeFactor::One => 0.0,
            TimeFactor::T => 1.0,
            TimeFactor::Cos(k) => {
                let w = k as f64 * PI / horizon;
                -w * (w * t).sin()
            }
        }
    }
}

/// Separable test function `φ(t, x) = space(x) · time(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub space: SpaceFactor,
    pub time: TimeFactor,
}

impl std::fmt::Display for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}*{:?}", self.space, self.time)
    }
}

/// `{1, x, x², cos(kπx/L)} × {1, t, cos(kπt/T)}` with `k ≤ 3`.
pub fn default_test_bank() -> Vec<TestFunction> {
    let spaces = [
        SpaceFactor::One,
        SpaceFactor::X,
        SpaceFactor::X2,
        SpaceFactor::Cos(1),
        SpaceFactor::Cos(2),
        SpaceFactor::Cos(3),
    ];
    let times = [
        TimeFactor::One,
        TimeFactor::T,
        TimeFactor::Cos(1),
        TimeFactor::Cos(2),
        TimeFactor::Cos(3),
    ];
    spaces
        .iter()
        .flat_map(|&space| times.iter().map(move |&time| TestFunction { space, time }))
        .collect()
}

/// Residual of the weak formulation for each test function:
/// `∫∫(−uφ_t + D u_x φ_x − f(u)φ) − ∫u₀φ(0) + ∫u(T)φ(T)`, in absolute value.
///
/// With every step recorded and `θ = 0.5` the trapezoid rule in time is the
/// scheme itself, so `φ ≡ 1` reproduces the discrete mass balance. With
/// `θ = 1` the same balance is off by `dt/2 · |∫f(u(T)) − ∫f(u₀)|`.
pub fn weak_residuals(
    traj: &Trajectory,
    profile: &DiffusivityProfile,
    r: &BistableReaction,
    bank: &[TestFunction],
) -> Result<Vec<f64>, AnalysisError> {
    let fields = traj.fields();
    if fields.len() < 2 {
        return Err(AnalysisError::InsufficientSnapshots(fields.len()));
    }
    let g = traj.grid();
    if !g.same_geometry(profile.grid()) {
        return Err(AnalysisError::GridMismatch(
            "profile and trajectory grids differ".into(),
        ));
    }
    let len = g.length();
    let origin = g.origin();
    let dx = g.dx();
    let face_d = profile.face_diffusivity(FaceAveraging::Harmonic);
    let t0 = fields[0].t();
    let horizon = traj.last().t() - t0;

    let mut spaces: Vec<SpaceFactor> = Vec::new();
    for tf in bank {
        if !spaces.contains(&tf.space) {
            spaces.push(tf.space);
        }
    }
    let cell_vals: Vec<Vec<f64>> = spaces
        .iter()
        .map(|s| g.cell_centers().iter().map(|&x| s.value(x - origin, len)).collect())
        .collect();
    let face_derivs: Vec<Vec<f64>> = spaces
        .iter()
        .map(|s| g.face_positions().iter().map(|&x| s.deriv(x - origin, len)).collect())
        .collect();

    // Per field and spatial factor: (∫u s, ∫f(u) s, ∫ D u_x s').
    let moments: Vec<Vec<[f64; 3]>> = fields
        .iter()
        .map(|field| {
            let u = field.values();
            let fu: Vec<f64> = u.iter().map(|&v| r.eval(v)).collect();
            (0..spaces.len())
                .map(|k| {
                    let (sv, sd) = (&cell_vals[k], &face_derivs[k]);
                    let mut mu = 0.0;
                    let mut mf = 0.0;
                    for i in 0..u.len() {
                        mu += u[i] * sv[i];
                        mf += fu[i] * sv[i];
                    }
                    let mut md = 0.0;
                    for j in 1..u.len() {
                        md += face_d[j] * (u[j] - u[j - 1]) * sd[j];
                    }
                    // (u_j − u_{j−1})/dx · dx cancels.
                    [mu * dx, mf * dx, md]
                })
                .collect()
        })
        .collect();

    let out = bank
        .iter()
        .map(|tf| {
            let k = spaces.iter().position(|s| *s == tf.space).expect("collected above");
            let integrand = |n: usize| {
                let t = fields[n].t() - t0;
                let [mu, mf, md] = moments[n][k];
                let tv = tf.time.value(t, horizon);
                -mu * tf.time.deriv(t, horizon) + md * tv - mf * tv
            };
            let mut integral = 0.0;
            let mut prev = integrand(0);
            for n in 1..fields.len() {
                let cur = integrand(n);
                integral += 0.5 * (fields[n].t() - fields[n - 1].t()) * (prev + cur);
                prev = cur;
            }
            let last = fields.len() - 1;
            let boundary = moments[0][k][0] * tf.time.value(0.0, horizon)
                - moments[last][k][0] * tf.time.value(horizon, horizon);
            (integral - boundary).abs()
        })
        .collect();
    Ok(out)
}

/// Largest entry of [`weak_residuals`].
pub fn weak_residual(
    traj: &Trajectory,
    profile: &DiffusivityProfile,
    r: &BistableReaction,
    bank: &[TestFunction],
) -> Result<f64, AnalysisError> {
    Ok(weak_residuals(traj, profile, r, bank)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Default threshold for [`detect_jump`].
pub const JUMP_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    /// Face position carrying the largest single-cell difference.
    pub x: f64,
    /// Total signed difference over the merged run of faces.
    pub height: f64,
}

/// Faces where neighbouring cells differ by more than `threshold`; runs of
/// adjacent faces are merged into one jump.
pub fn detect_jump(state: &Field, threshold: f64) -> Vec<Jump> {
    let u = state.values();
    let faces = state.grid().face_positions();
    let mut jumps = Vec::new();
    let mut run: Option<(usize, f64, f64)> = None; // (best face, best |d|, total)
    for j in 1..u.len() {
        let d = u[j] - u[j - 1];
        if d.abs() > threshold {
            run = Some(match run {
                Some((_, bd, tot)) if d.abs() > bd => (j, d.abs(), tot + d),
                Some((bf, bd, tot)) => (bf, bd, tot + d),
                None => (j, d.abs(), d),
            });
        } else if let Some((bf, _, tot)) = run.take() {
            jumps.push(Jump {
                x: faces[bf],
                height: tot,
            });
        }
    }
    if let Some((bf, _, tot)) = run {
        jumps.push(Jump {
            x: faces[bf],
            height: tot,
        });
    }
    jumps
}

/// Bisection root of `g(x) = level` on `[lo, hi]`, to `1e-10`.
pub fn threshold_crossing(
    g: impl Fn(f64) -> f64,
    level: f64,
    lo: f64,
    hi: f64,
) -> Result<f64, AnalysisError> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = g(a) - level;
    let fb = g(b) - level;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(AnalysisError::NoBracket { lo, hi });
    }
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        let fm = g(m) - level;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Extremes over a set of fields, checked against `[0, M]` with slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsAudit {
    pub min: f64,
    pub max: f64,
    pub upper: f64,
    pub slack: f64,
}

impl BoundsAudit {
    pub fn new(upper: f64, slack: f64) -> Self {
        Self {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            upper,
            slack,
        }
    }

    pub fn push(&mut self, field: &Field) {
        self.min = self.min.min(field.min());
        self.max = self.max.max(field.max());
    }

    pub fn holds(&self) -> bool {
        self.min >= -self.slack && self.max <= self.upper + self.slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use std::sync::Arc;

    fn grid() -> Arc<Grid1D> {
        Arc::new(build_grid(4.0, 400, &[1.0, 3.0]).unwrap())
    }

    #[test]
    fn gradients_of_simple_fields() {
        let g = grid();
        let lin = Field::from_fn(g.clone(), 0.0, |x| x);
        let cst = Field::constant(g.clone(), 0.3);
        for which in [InterfaceSide::Left, InterfaceSide::Right] {
            for side in [GradientSide::InnerSide, GradientSide::OuterSide] {
                let d = interface_gradient(&lin, which, side).unwrap();
                assert!((d - 1.0).abs() < 1e-10, "{which:?} {side:?}: {d}");
                assert!(interface_gradient(&cst, which, side).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradient_of_quadratic_is_exact() {
        let g = grid();
        let q = Field::from_fn(g, 0.0, |x| x * x - 0.5 * x);
        let d = interface_gradient(&q, InterfaceSide::Left, GradientSide::InnerSide).unwrap();
        assert!((d - 1.5).abs() < 1e-9);
        let d = interface_gradient(&q, InterfaceSide::Right, GradientSide::OuterSide).unwrap();
        assert!((d - 5.5).abs() < 1e-9);
    }

    #[test]
    fn gradient_needs_three_cells() {
        let g = Arc::new(build_grid(1.0, 10, &[0.2, 0.9]).unwrap());
        let u = Field::constant(g.clone(), 0.0);
        assert_eq!(
            interface_gradient(&u, InterfaceSide::Left, GradientSide::OuterSide),
            Err(AnalysisError::TooFewCells(2))
        );
        assert_eq!(
            interface_gradient(&u, InterfaceSide::Right, GradientSide::OuterSide),
            Err(AnalysisError::TooFewCells(1))
        );
        let plain = Arc::new(build_grid(1.0, 10, &[]).unwrap());
        assert_eq!(
            interface_gradient(&Field::constant(plain, 0.0), InterfaceSide::Left, GradientSide::InnerSide),
            Err(AnalysisError::NoInterface)
        );
    }

    #[test]
    fn exact_square_root_fit() {
        let eps: Vec<f64> = (0..9).map(|j| (-(j as f64)).exp()).collect();
        let vals: Vec<f64> = eps.iter().map(|e| e.sqrt()).collect();
        let fit = fit_power_law(&eps, &vals).unwrap();
        assert!((fit.a - 0.5).abs() < 1e-14);
        assert!(fit.b.abs() < 1e-14);
        assert!(fit.residual < 1e-14);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(matches!(
            fit_power_law(&[1.0, 0.5, 0.0], &[1.0, 1.0, 1.0]),
            Err(AnalysisError::NonPositiveInput(_))
        ));
        assert!(fit_power_law(&[1.0, 0.5], &[1.0, 1.0]).is_err());
        assert!(fit_power_law(&[1.0, 0.5, 0.2], &[1.0, -1.0, 1.0]).is_err());
    }

    #[test]
    fn l2_of_constant_difference() {
        let g = grid();
        let u = Field::constant(g.clone(), 0.7);
        let v = Field::constant(g.clone(), 0.2);
        assert_eq!(l2_space(&u, &u, RegionSelector::All).unwrap(), 0.0);
        let d = l2_space(&u, &v, RegionSelector::Inner).unwrap();
        assert!((d - 0.5 * 2f64.sqrt()).abs() < 1e-12);
        let d = l2_space(&u, &v, RegionSelector::Outer).unwrap();
        assert!((d - 0.5 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn jumps() {
        let g = Arc::new(build_grid(1.0, 100, &[]).unwrap());
        let smooth = Field::from_fn(g.clone(), 0.0, |x| x);
        assert!(detect_jump(&smooth, JUMP_THRESHOLD).is_empty());
        let stair = Field::from_fn(g.clone(), 0.0, |x| {
            if x < 0.3 {
                0.0
            } else if x < 0.7 {
                1.0
            } else {
                0.4
            }
        });
        let j = detect_jump(&stair, JUMP_THRESHOLD);
        assert_eq!(j.len(), 2);
        assert!((j[0].x - 0.3).abs() < 1e-12 && j[0].height == 1.0);
        assert!((j[1].x - 0.7).abs() < 1e-12 && (j[1].height + 0.6).abs() < 1e-15);
    }

    #[test]
    fn crossings() {
        let x = threshold_crossing(|x| x, 0.5, 0.0, 1.0).unwrap();
        assert!((x - 0.5).abs() < 1e-10);
        let sq = |x: f64| (PI * x / 4.0).sin();
        let x = threshold_crossing(sq, 1.0 / 3.0, 0.0, 1.0).unwrap();
        let exact = 4.0 / PI * (1.0f64 / 3.0).asin();
        assert!((x - exact).abs() < 1e-10);
        assert!((x - 0.4327).abs() < 1e-4);
        let y = threshold_crossing(sq, 1.0 / 3.0, 3.0, 4.0).unwrap();
        assert!((y - (4.0 - exact)).abs() < 1e-10);
        assert!((x + y - 4.0).abs() < 1e-10);
        assert!(matches!(
            threshold_crossing(sq, 2.0, 0.0, 1.0),
            Err(AnalysisError::NoBracket { .. })
        ));
    }

    #[test]
    fn test_bank_has_thirty_members() {
        assert_eq!(default_test_bank().len(), 30);
    }
}
