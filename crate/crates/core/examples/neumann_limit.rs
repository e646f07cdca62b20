//! Compares the inner solution with the zero-flux problem on (1, 3) as ε
//! shrinks.

use std::sync::Arc;

use hetero_rd::analysis::{sup_distance, RegionSelector};
use hetero_rd::limits::solve_neumann_limit;
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 2000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let cfg = TimeStepConfig::new(1e-4, 1.0, 0.1, vec![0.0, 0.1]);
    let neumann = solve_neumann_limit(&grid, &r, &u0, &cfg)?;

    for j in [1, 2, 4, 8] {
        let profile = DiffusivityProfile::sharp(grid.clone(), (-(j as f64)).exp())?;
        let traj = solve(&grid, &profile, &r, &u0, &cfg)?;
        let inner = traj.last().restrict(grid.inner_cells())?;
        let gap = sup_distance(&inner, neumann.last(), RegionSelector::All)?;
        println!("eps=e-{j}: sup gap on the inner interval {gap:.5e}");
    }
    Ok(())
}
