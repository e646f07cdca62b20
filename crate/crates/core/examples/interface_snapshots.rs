//! Solves the sharp-interface problem for a few ε and prints the inner and
//! outer gradients at the left interface.

use std::sync::Arc;

use hetero_rd::analysis::{interface_flux, interface_gradient, GradientSide};
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, InterfaceSide,
    TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 1000, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let cfg = TimeStepConfig::new(1e-3, 1.0, 0.1, vec![0.0, 0.01, 0.1]);

    for j in [1, 4, 8] {
        let eps = (-(j as f64)).exp();
        let profile = DiffusivityProfile::sharp(grid.clone(), eps)?;
        let traj = solve(&grid, &profile, &r, &u0, &cfg)?;
        for f in traj.snapshots().skip(1) {
            let inner = interface_gradient(f, InterfaceSide::Left, GradientSide::InnerSide)?;
            let outer = interface_gradient(f, InterfaceSide::Left, GradientSide::OuterSide)?;
            let flux = interface_flux(f, &profile, InterfaceSide::Left)?;
            println!(
                "eps=e-{j} t={:<5} u_x(1+)={inner:>9.5} u_x(1-)={outer:>9.5} flux={flux:.3e}",
                f.t()
            );
        }
    }
    Ok(())
}
