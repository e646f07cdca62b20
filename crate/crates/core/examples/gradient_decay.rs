//! Fits |u_x(t, 1+)| ≈ e^b ε^a over ε = e^{-j}, j = 0..8.

use std::sync::Arc;

use hetero_rd::analysis::{fit_power_law, interface_gradient, GradientSide};
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, InterfaceSide,
    TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 4000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let times = [0.01, 0.04, 0.09];
    let cfg = TimeStepConfig::new(1e-4, 1.0, 0.09, vec![0.0, 0.01, 0.04, 0.09]);

    let eps: Vec<f64> = (0..=8).map(|j| (-(j as f64)).exp()).collect();
    let mut grads = vec![Vec::new(); times.len()];
    for &e in &eps {
        let profile = DiffusivityProfile::sharp(grid.clone(), e)?;
        let traj = solve(&grid, &profile, &r, &u0, &cfg)?;
        for (k, &t) in times.iter().enumerate() {
            let f = traj.at(t).expect("snapshot");
            let g = interface_gradient(f, InterfaceSide::Left, GradientSide::InnerSide)?;
            grads[k].push(g.abs());
        }
    }
    for (t, g) in times.iter().zip(&grads) {
        let fit = fit_power_law(&eps, g)?;
        println!("t={t}: a={:.4} b={:.4} residual={:.2e}", fit.a, fit.b, fit.residual);
    }
    Ok(())
}
