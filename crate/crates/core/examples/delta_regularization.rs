//! Distance in L²(Q_T) between smoothed-coefficient runs and the sharp one.

use std::sync::Arc;

use hetero_rd::analysis::{l2_space_time, RegionSelector};
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 1000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let eps = (-4f64).exp();
    let cfg = TimeStepConfig {
        record_every: 10,
        ..TimeStepConfig::new(1e-4, 1.0, 0.1, vec![0.0, 0.1])
    };
    let sharp = solve(&grid, &DiffusivityProfile::sharp(grid.clone(), eps)?, &r, &u0, &cfg)?;
    for k in [8.0, 4.0, 2.0] {
        let delta = k * grid.dx();
        let profile = DiffusivityProfile::smoothed(grid.clone(), eps, delta)?;
        let smooth = solve(&grid, &profile, &r, &u0, &cfg)?;
        let d = l2_space_time(&smooth, &sharp, RegionSelector::All)?;
        println!("delta={delta:.4}: {d:.4e}");
    }
    Ok(())
}
