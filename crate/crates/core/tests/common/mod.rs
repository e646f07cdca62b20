//! Reference computations shared by the oracle and acceptance targets.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use hetero_rd::analysis::{default_test_bank, weak_residuals, TestFunction};
use hetero_rd::solver::{initial_field, solve_observed, thomas_solve};
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, FaceAveraging, Field, Grid1D,
    InitialDatum, TimeStepConfig, Trajectory,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn section_five(n: usize) -> Arc<Grid1D> {
    Arc::new(build_grid(4.0, n, &[1.0, 3.0]).unwrap())
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Largest deviation between the Thomas solver and dense elimination over
/// `count` random diagonally dominant `n × n` systems.
pub fn thomas_vs_dense(seed: u64, count: usize, n: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        // sub[i] couples rows i+1 and i; sup[i] couples rows i and i+1.
        let sub: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sup: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let main: Vec<f64> = (0..n)
            .map(|i| {
                let left = if i > 0 { sub[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { sup[i].abs() } else { 0.0 };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * (left + right + rng.gen_range(0.1..2.0))
            })
            .collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = main[i];
            if i > 0 {
                dense[i][i - 1] = sub[i - 1];
            }
            if i + 1 < n {
                dense[i][i + 1] = sup[i];
            }
        }
        let expected = dense_solve(dense, rhs.clone());
        let got = thomas_solve(&sub, &main, &sup, &rhs).unwrap();
        for (a, b) in got.iter().zip(&expected) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Max-norm errors of `0.5 + 0.25 e^{−k²t} cos(kx)`, `k = π/4`, under pure
/// diffusion with `D ≡ 1` at `t = 0.25`, for 25, 50, 100, 200 cells.
pub fn heat_eigenmode_errors() -> Vec<f64> {
    let t_end = 0.25;
    let k = PI / 4.0;
    [25, 50, 100, 200]
        .iter()
        .map(|&n| {
            let grid = Arc::new(build_grid(4.0, n, &[]).unwrap());
            let profile = DiffusivityProfile::unit(grid.clone());
            let u0 = Field::from_fn(grid.clone(), 0.0, |x| 0.5 + 0.25 * (k * x).cos());
            let cfg = TimeStepConfig::new(1e-4, 0.5, t_end, vec![0.0, t_end]);
            let traj = solve(&grid, &profile, &BistableReaction::zero(1.0), &u0, &cfg).unwrap();
            let decay = (-k * k * t_end).exp();
            grid.cell_centers()
                .iter()
                .zip(traj.last().values())
                .map(|(&x, &u)| (u - (0.5 + 0.25 * decay * (k * x).cos())).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Every step recorded, `sin_quarter` data, `t_end = 0.1`.
pub fn dense_run(
    grid: Arc<Grid1D>,
    eps: f64,
    dt: f64,
    theta: f64,
) -> (Trajectory, DiffusivityProfile) {
    let profile = DiffusivityProfile::sharp(grid.clone(), eps).unwrap();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let cfg = TimeStepConfig {
        dt,
        theta,
        t_end: 0.1,
        snapshot_times: vec![0.0, 0.1],
        record_every: 1,
        ..TimeStepConfig::default()
    };
    let traj = solve_observed(
        &grid,
        &profile,
        &BistableReaction::reference(),
        &u0,
        &cfg,
        FaceAveraging::Harmonic,
        |_| {},
    )
    .unwrap();
    (traj, profile)
}

/// Weak residuals for the whole bank at three `(dt, dx)` levels, each half
/// the previous one.
pub fn weak_residual_levels() -> (Vec<TestFunction>, Vec<Vec<f64>>) {
    let r = BistableReaction::reference();
    let bank = default_test_bank();
    let levels = [(1600, 2.5e-4), (3200, 1.25e-4), (6400, 6.25e-5)]
        .iter()
        .map(|&(n, dt)| {
            // Off-centre interfaces: with a symmetric layout the odd cosines
            // integrate to zero and only roundoff is left to compare.
            let grid = Arc::new(build_grid(4.0, n, &[1.0, 2.6]).unwrap());
            let (traj, profile) = dense_run(grid, (-2f64).exp(), dt, 1.0);
            weak_residuals(&traj, &profile, &r, &bank).unwrap()
        })
        .collect();
    (bank, levels)
}

/// `(sup |f|, sup f′)` on `[0, 1]` from `10⁶ + 1` equally spaced samples.
pub fn dense_reaction_scan(r: &BistableReaction) -> (f64, f64) {
    let n = 1_000_000;
    let (mut m_f, mut m_tilde): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let u = i as f64 / n as f64 * r.upper_bound();
        m_f = m_f.max(r.eval(u).abs());
        m_tilde = m_tilde.max(r.deriv(u));
    }
    (m_f, m_tilde)
}
