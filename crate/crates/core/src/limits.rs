//! The two `ε → 0` limit problems.
//!
//! Inside, the solution tends to the pure Neumann problem on the inner
//! interval. Outside, diffusion disappears and every point follows the scalar
//! ODE `u' = f(u)` on its own.

use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coefficients::{BistableReaction, DiffusivityProfile, FaceAveraging};
use crate::grid::Grid1D;
use crate::solver::{solve_observed, Field, RunMetadata, SolverError, TimeStepConfig, Trajectory};

/// Default step of the per-cell RK4 integration.
pub const ODE_DT: f64 = 1e-4;

/// Tolerance within which an initial value counts as the unstable state α.
pub const EQUILIBRIUM_TOL: f64 = 1e-12;

/// A contiguous block of cells of a parent grid, re-based onto its own grid.
#[derive(Debug, Clone)]
pub struct SubgridProblem {
    pub parent: Arc<Grid1D>,
    pub cells: Range<usize>,
    pub grid: Arc<Grid1D>,
    pub u0: Field,
}

impl SubgridProblem {
    fn new(parent: &Arc<Grid1D>, u0: &Field, cells: Range<usize>) -> Result<Self, SolverError> {
        if !parent.same_geometry(u0.grid()) {
            return Err(SolverError::GridMismatch);
        }
        let restricted = u0.restrict(cells.clone())?;
        Ok(Self {
            parent: parent.clone(),
            cells,
            grid: restricted.grid().clone(),
            u0: restricted,
        })
    }

    /// The inner region; its ends are the two interface faces.
    pub fn inner(parent: &Arc<Grid1D>, u0: &Field) -> Result<Self, SolverError> {
        let cells = parent.inner_cells();
        if parent.interface_faces().len() != 2 || cells.len() < 2 {
            return Err(SolverError::InvalidConfig(
                "the Neumann limit needs a grid with two interfaces".into(),
            ));
        }
        Self::new(parent, u0, cells)
    }

    /// Each connected component of the outer region.
    pub fn outer_components(parent: &Arc<Grid1D>, u0: &Field) -> Result<Vec<Self>, SolverError> {
        parent
            .outer_cells()
            .into_iter()
            .filter(|r| r.len() >= 2)
            .map(|r| Self::new(parent, u0, r))
            .collect()
    }
}

/// `u_t = u_xx + f(u)` on the inner interval with zero flux through both
/// interfaces. `u0` lives on the full grid.
pub fn solve_neumann_limit(
    grid: &Arc<Grid1D>,
    r: &BistableReaction,
    u0: &Field,
    cfg: &TimeStepConfig,
) -> Result<Trajectory, SolverError> {
    let sub = SubgridProblem::inner(grid, u0)?;
    let profile = DiffusivityProfile::unit(sub.grid.clone());
    solve_observed(
        &sub.grid,
        &profile,
        r,
        &sub.u0,
        cfg,
        FaceAveraging::Harmonic,
        |_| {},
    )
}

/// Classical RK4 for `u' = f(u)` from `t = 0`, returning the value at each
/// of `times` (sorted, nonnegative). The final step into each time is
/// shortened so it lands exactly.
pub fn integrate_scalar(u0: f64, r: &BistableReaction, times: &[f64], dt: f64) -> Vec<f64> {
    let rk4 = |u: f64, h: f64| {
        let k1 = r.eval(u);
        let k2 = r.eval(u + 0.5 * h * k1);
        let k3 = r.eval(u + 0.5 * h * k2);
        let k4 = r.eval(u + h * k3);
        u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut u) = (0.0, u0);
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let n_full = (span / dt + 1e-9).floor() as usize;
            for _ in 0..n_full {
                u = rk4(u, dt);
            }
            let rem = span - n_full as f64 * dt;
            if rem > 1e-9 * dt {
                u = rk4(u, rem);
            }
            t = target;
        }
        out.push(u);
    }
    out
}

/// Integrates `u' = f(u)` independently in every cell of `u0`. The
/// trajectory starts with `u0` itself followed by the positive `times`.
pub fn solve_ode_limit(
    u0: &Field,
    r: &BistableReaction,
    times: &[f64],
) -> Result<Trajectory, SolverError> {
    solve_ode_limit_with_dt(u0, r, times, ODE_DT)
}

pub fn solve_ode_limit_with_dt(
    u0: &Field,
    r: &BistableReaction,
    times: &[f64],
    dt: f64,
) -> Result<Trajectory, SolverError> {
    if !(dt > 0.0) {
        return Err(SolverError::InvalidConfig(format!("dt must be > 0, got {dt}")));
    }
    let mut out_times: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    if out_times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(SolverError::InvalidConfig(
            "ODE output times must be nonnegative and strictly increasing".into(),
        ));
    }
    let upper = r.upper_bound();
    if let Some(&bad) = u0.values().iter().find(|&&v| !(v >= 0.0 && v <= upper)) {
        return Err(SolverError::InvalidInitialData(format!(
            "initial value {bad} outside [0, {upper}]"
        )));
    }

    // Per-cell columns are independent, so the batch order cannot change bits.
    let columns: Vec<Vec<f64>> = u0
        .values()
        .par_iter()
        .with_min_len(256)
        .map(|&v| integrate_scalar(v, r, &out_times, dt))
        .collect();

    let grid = u0.grid().clone();
    let mut fields = Vec::with_capacity(out_times.len() + 1);
    fields.push(Field::new(grid.clone(), u0.values().to_vec(), 0.0)?);
    for (k, &t) in out_times.iter().enumerate() {
        let values = columns.iter().map(|c| c[k]).collect();
        fields.push(Field::new(grid.clone(), values, t)?);
    }
    let t_end = out_times.last().copied().unwrap_or(0.0);
    out_times.insert(0, 0.0);
    let meta = RunMetadata {
        epsilon: 0.0,
        delta: 0.0,
        alpha: r.alpha(),
        reaction_scale: r.scale(),
        upper_bound: upper,
        origin: grid.origin(),
        length: grid.length(),
        n_cells: grid.n_cells(),
        interfaces: grid.interface_positions(),
        config: TimeStepConfig {
            dt,
            snapshot_times: out_times,
            t_end,
            ..TimeStepConfig::default()
        },
        steps: (t_end / dt).ceil() as usize,
        newton_iterations: 0,
    };
    Trajectory::from_fields(fields, meta)
}

/// The `t → ∞` limit of the pointwise ODE: 0 below α, 1 above, α on it.
pub fn asymptotic_profile(u0: &Field, r: &BistableReaction) -> Field {
    let alpha = r.alpha();
    let values = u0
        .values()
        .iter()
        .map(|&v| {
            if (v - alpha).abs() <= EQUILIBRIUM_TOL {
                alpha
            } else if v < alpha {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    Field::new(u0.grid().clone(), values, f64::INFINITY).expect("same grid, finite values")
}
