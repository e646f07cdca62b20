//! Solver and diagnostic checks against independent reference computations.

use std::f64::consts::PI;
use std::sync::Arc;

use hetero_rd::analysis::{
    default_test_bank, energy_report, fit_power_law, l2_space_time, weak_residuals,
    RegionSelector, SpaceFactor, TimeFactor,
};
use hetero_rd::limits::{integrate_scalar, solve_neumann_limit, ODE_DT};
use hetero_rd::solver::{
    assemble_diffusion, initial_field, step_theta, RunMetadata,
};
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, FaceAveraging, Field, Grid1D,
    InitialDatum, TimeStepConfig, Trajectory,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{
    dense_reaction_scan, dense_run, heat_eigenmode_errors, orders, section_five, thomas_vs_dense,
    weak_residual_levels,
};

#[test]
fn thomas_matches_dense_elimination() {
    let err = thomas_vs_dense(7, 100, 50);
    assert!(err < 1e-10, "max error {err:e}");
}

#[test]
fn one_crank_nicolson_step_on_a_cosine() {
    let n = 1000;
    let grid = Arc::new(build_grid(1.0, n, &[]).unwrap());
    let dx = grid.dx();
    let profile = DiffusivityProfile::unit(grid.clone());
    let op = assemble_diffusion(&grid, &profile.face_diffusivity(FaceAveraging::Harmonic)).unwrap();
    // Signed data: the single step bypasses the [0, M] check of `solve`.
    let u0 = Field::from_fn(grid.clone(), 0.0, |x| (PI * x).cos());
    let dt = 1e-3;
    let cfg = TimeStepConfig {
        dt,
        theta: 0.5,
        ..TimeStepConfig::default()
    };
    let u1 = step_theta(&u0, &op, &BistableReaction::zero(1.0), &cfg).unwrap();
    let lambda_h = -4.0 / (dx * dx) * (PI * dx / 2.0).sin().powi(2);
    let factor_h = (1.0 + 0.5 * lambda_h * dt) / (1.0 - 0.5 * lambda_h * dt);
    for (a, b) in u1.values().iter().zip(u0.values()) {
        assert!((a - factor_h * b).abs() < 1e-12);
    }
    let exact = (-PI * PI * dt).exp();
    let bound = PI.powi(6) * dt.powi(3) / 12.0 + PI.powi(4) * dx * dx * dt / 12.0;
    assert!((factor_h - exact).abs() < 2.0 * bound, "{factor_h} vs {exact}");
}

#[test]
fn heat_eigenmode_second_order_in_space() {
    let errors = heat_eigenmode_errors();
    for order in orders(&errors) {
        assert!(order >= 1.9, "order {order} from {errors:?}");
    }
}

fn run_sharp(n: usize, eps: f64, dt: f64, t_end: f64) -> Trajectory {
    let grid = section_five(n);
    let profile = DiffusivityProfile::sharp(grid.clone(), eps).unwrap();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let cfg = TimeStepConfig::new(dt, 1.0, t_end, vec![0.0, t_end]);
    solve(&grid, &profile, &BistableReaction::reference(), &u0, &cfg).unwrap()
}

/// Cell averages of a field on a mesh twice as fine.
fn coarsen(fine: &[f64]) -> Vec<f64> {
    fine.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

#[test]
fn sharp_interface_self_convergence() {
    let eps = (-2f64).exp();
    let fields: Vec<Vec<f64>> = [100, 200, 400, 800]
        .iter()
        .map(|&n| run_sharp(n, eps, 1e-4, 0.1).last().values().to_vec())
        .collect();
    let diffs: Vec<f64> = fields
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(coarsen(&w[1]))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in diffs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 0.9, "order {order} from {diffs:?}");
    }
}

#[test]
fn halving_dt_changes_little() {
    let eps = (-4f64).exp();
    let a = run_sharp(4000, eps, 1e-4, 0.1);
    let b = run_sharp(4000, eps, 5e-5, 0.1);
    let d = a
        .last()
        .values()
        .iter()
        .zip(b.last().values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(d < 1e-4, "{d:e}");
}

/// Time for `u' = u(u − α)(1 − u)` to go from `u0` to `u`, by partial
/// fractions; valid while both stay in the same interval between roots.
fn cubic_ode_time(u0: f64, u: f64, alpha: f64) -> f64 {
    let primitive = |v: f64| {
        -v.abs().ln() / alpha + (v - alpha).abs().ln() / (alpha * (1.0 - alpha))
            - (1.0 - v).abs().ln() / (1.0 - alpha)
    };
    primitive(u) - primitive(u0)
}

/// Inverts [`cubic_ode_time`] by bisection on `(lo, hi)`.
fn cubic_ode_exact(u0: f64, t: f64, alpha: f64) -> f64 {
    let (mut lo, mut hi) = if u0 > alpha { (u0, 1.0) } else { (0.0, u0) };
    let increasing = u0 > alpha;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let tm = cubic_ode_time(u0, mid, alpha);
        if (tm < t) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn rk4_matches_closed_form_ode() {
    let r = BistableReaction::reference();
    let times = [0.1, 1.0, 5.0, 20.0];
    for u0 in [0.05, 0.2, 0.34, 0.5, 0.9] {
        let got = integrate_scalar(u0, &r, &times, ODE_DT);
        for (&t, g) in times.iter().zip(got) {
            let exact = cubic_ode_exact(u0, t, 1.0 / 3.0);
            assert!((g - exact).abs() < 1e-9, "u0 {u0} t {t}: {g} vs {exact}");
        }
    }
}

#[test]
fn half_reaches_099_by_forty() {
    // Tiny-step forward Euler.
    let r = BistableReaction::reference();
    let mut u = 0.5;
    let dt = 1e-5;
    for _ in 0..(40.0 / dt) as usize {
        u += dt * r.eval(u);
    }
    assert!(u > 0.99);
    let rk = integrate_scalar(0.5, &r, &[40.0], ODE_DT)[0];
    assert!(rk > 0.99 && (rk - u).abs() < 1e-4);
}

#[test]
fn constant_data_follow_the_scalar_ode() {
    let grid = section_five(400);
    let r = BistableReaction::reference();
    let c = 0.6;
    let u0 = Field::constant(grid.clone(), c);
    let cfg = TimeStepConfig::new(1e-4, 0.5, 0.5, vec![0.0, 0.25, 0.5]);
    let exact = [c, cubic_ode_exact(c, 0.25, 1.0 / 3.0), cubic_ode_exact(c, 0.5, 1.0 / 3.0)];

    let neumann = solve_neumann_limit(&grid, &r, &u0, &cfg).unwrap();
    let profile = DiffusivityProfile::sharp(grid.clone(), (-4f64).exp()).unwrap();
    let full = solve(&grid, &profile, &r, &u0, &cfg).unwrap();
    for traj in [&neumann, &full] {
        for (f, e) in traj.fields().iter().zip(exact) {
            for &v in f.values() {
                assert!((v - e).abs() < 1e-8, "t {}: {v} vs {e}", f.t());
            }
        }
    }
}

#[test]
fn reaction_bounds_match_dense_scan() {
    let r = BistableReaction::reference();
    let (m_f, m_tilde) = dense_reaction_scan(&r);
    // Dense-scan value, recorded once.
    assert!((m_f - 0.078_244_881_145_242_29).abs() < 1e-15);
    assert!((r.m_f() - m_f).abs() < 1e-11, "{} vs {m_f}", r.m_f());
    assert!((r.m_tilde_f() - m_tilde).abs() < 1e-11);
    assert!((r.m_tilde_f() - 7.0 / 27.0).abs() < 1e-12);
}

#[test]
fn c1_bound_plug_in() {
    let traj = run_sharp(400, (-2f64).exp(), 1e-3, 0.1);
    let grid = traj.grid().clone();
    let profile = DiffusivityProfile::sharp(grid, (-2f64).exp()).unwrap();
    let r = BistableReaction::reference();
    let report = energy_report(&traj, &profile, &r).unwrap();
    assert!((report.c1_bound - (2.0 + 0.4 * r.m_f())).abs() < 1e-14);
}

fn synthetic(grid: &Arc<Grid1D>, times: &[f64], g: impl Fn(f64, f64) -> f64) -> Trajectory {
    let fields: Vec<Field> = times
        .iter()
        .map(|&t| Field::from_fn(grid.clone(), t, |x| g(x, t)))
        .collect();
    let meta = RunMetadata {
        epsilon: 1.0,
        delta: 0.0,
        alpha: 1.0 / 3.0,
        reaction_scale: 1.0,
        upper_bound: 1.0,
        origin: grid.origin(),
        length: grid.length(),
        n_cells: grid.n_cells(),
        interfaces: grid.interface_positions(),
        config: TimeStepConfig::default(),
        steps: 0,
        newton_iterations: 0,
    };
    Trajectory::from_fields(fields, meta).unwrap()
}

#[test]
fn space_time_l2_matches_fine_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = section_five(400);
    let times: Vec<f64> = (0..=200).map(|k| k as f64 * 0.5 / 200.0).collect();
    for _ in 0..5 {
        let c: Vec<f64> = (0..6).map(|_| rng.gen_range(0.1..1.0)).collect();
        let u = |x: f64, t: f64| 0.5 + 0.2 * c[0] * (c[1] * x + t).sin();
        let v = |x: f64, t: f64| 0.5 + 0.2 * c[2] * (c[3] * x * x / 4.0 - c[4] * t).cos() * (-c[5] * t).exp();
        let a = synthetic(&grid, &times, u);
        let b = synthetic(&grid, &times, v);
        let got = l2_space_time(&a, &b, RegionSelector::All).unwrap();

        // Composite Simpson, 2000 × 2000 panels.
        let simpson = |h: f64, n: usize, f: &dyn Fn(f64) -> f64, lo: f64| {
            let mut s = f(lo) + f(lo + n as f64 * h);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
            }
            s * h / 3.0
        };
        let inner = |t: f64| simpson(4.0 / 2000.0, 2000, &|x| (u(x, t) - v(x, t)).powi(2), 0.0);
        let oracle = simpson(0.5 / 2000.0, 2000, &inner, 0.0).sqrt();
        assert!((got - oracle).abs() / oracle < 1e-3, "{got} vs {oracle}");
    }
}

#[test]
fn power_law_fit_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let eps: Vec<f64> = (0..=8).map(|j| (-(j as f64)).exp()).collect();
    let vals: Vec<f64> = eps
        .iter()
        .map(|e| 0.55 * e.powf(0.5) * (1.0 + 0.05 * rng.gen_range(-1.0..1.0)))
        .collect();
    let fit = fit_power_law(&eps, &vals).unwrap();
    // [Σx² Σx; Σx n] [a; b] = [Σxy; Σy]
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let det = sxx * n - sx * sx;
    let a = (sxy * n - sx * sy) / det;
    let b = (sxx * sy - sx * sxy) / det;
    assert!((fit.a - a).abs() < 1e-12 && (fit.b - b).abs() < 1e-12);
}

fn constant_index(bank: &[hetero_rd::analysis::TestFunction]) -> usize {
    bank.iter()
        .position(|f| f.space == SpaceFactor::One && f.time == TimeFactor::One)
        .unwrap()
}

#[test]
fn constant_test_function_gives_the_mass_balance() {
    let r = BistableReaction::reference();
    let bank = default_test_bank();
    let one = constant_index(&bank);
    for j in [1, 2, 4, 8] {
        let eps = (-(j as f64)).exp();
        let (traj, profile) = dense_run(section_five(4000), eps, 1e-4, 0.5);
        let res = weak_residuals(&traj, &profile, &r, &bank).unwrap();
        assert!(res[one] < 1e-6, "e-{j}: {:e}", res[one]);
    }
}

#[test]
fn backward_euler_balance_defect() {
    // Backward Euler against trapezoid-in-time leaves dt/2 · |F(T) − F(0)|,
    // F = ∫ f(u) dx, up to the Newton tolerance.
    let r = BistableReaction::reference();
    let bank = default_test_bank();
    let one = constant_index(&bank);
    let dt = 1e-4;
    let (traj, profile) = dense_run(section_five(4000), (-2f64).exp(), dt, 1.0);
    let res = weak_residuals(&traj, &profile, &r, &bank).unwrap()[one];
    let big_f = |f: &Field| f.values().iter().map(|&u| r.eval(u)).sum::<f64>() * f.grid().dx();
    let predicted = 0.5 * dt * (big_f(traj.last()) - big_f(traj.initial())).abs();
    assert!((res - predicted).abs() < 1e-9, "{res:e} vs {predicted:e}");
}

#[test]
fn weak_residual_shrinks_under_refinement() {
    let (bank, levels) = weak_residual_levels();
    for (k, phi) in bank.iter().enumerate() {
        for w in levels.windows(2) {
            assert!(w[1][k] < w[0][k], "{phi}: {:e} -> {:e}", w[0][k], w[1][k]);
        }
    }
}
