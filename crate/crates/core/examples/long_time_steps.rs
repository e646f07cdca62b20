//! Runs ε = e^{-16} to t = 100 and reports where the profile jumps.

use std::sync::Arc;

use hetero_rd::analysis::{detect_jump, JUMP_THRESHOLD};
use hetero_rd::solver::{initial_field, DtSwitch};
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 4000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let profile = DiffusivityProfile::sharp(grid.clone(), (-16f64).exp())?;
    let cfg = TimeStepConfig {
        late_dt: Some(DtSwitch { after: 1.0, dt: 1e-3 }),
        ..TimeStepConfig::new(1e-4, 1.0, 100.0, vec![0.0, 1.0, 10.0, 40.0, 100.0])
    };
    let traj = solve(&grid, &profile, &r, &u0, &cfg)?;
    let crossing = 4.0 / std::f64::consts::PI * (1.0f64 / 3.0).asin();
    println!("u0 crosses 1/3 at {crossing:.6}");
    for f in traj.snapshots() {
        let jumps: Vec<String> = detect_jump(f, JUMP_THRESHOLD)
            .iter()
            .map(|j| format!("{:.4} ({:+.3})", j.x, j.height))
            .collect();
        println!("t={:>5}: jumps {}", f.t(), jumps.join(", "));
    }
    Ok(())
}
