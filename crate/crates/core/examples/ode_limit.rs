//! Compares the outer solution at tiny ε with the pointwise ODE u' = f(u).

use std::sync::Arc;

use hetero_rd::limits::solve_ode_limit;
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, Region,
    TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 2000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let cfg = TimeStepConfig::new(1e-4, 1.0, 0.1, vec![0.0, 0.1]);
    let ode = solve_ode_limit(&u0, &r, &[0.1])?;

    for j in [2, 4, 8] {
        let profile = DiffusivityProfile::sharp(grid.clone(), (-(j as f64)).exp())?;
        let pde = solve(&grid, &profile, &r, &u0, &cfg)?;
        let diff = grid
            .cell_centers()
            .iter()
            .enumerate()
            .filter(|&(i, &x)| {
                grid.cell_region(i) == Region::Outer && grid.distance_to_interface(x) > 0.1
            })
            .map(|(i, _)| (pde.last().values()[i] - ode.last().values()[i]).abs())
            .fold(0.0, f64::max);
        println!("eps=e-{j}: max |u - u_ode| away from the interfaces {diff:.4e}");
    }
    Ok(())
}
