//! Energy identity terms and weak-form residuals for one run.

use std::sync::Arc;

use hetero_rd::analysis::{default_test_bank, energy_report, weak_residuals};
use hetero_rd::solver::initial_field;
use hetero_rd::{
    build_grid, solve, BistableReaction, DiffusivityProfile, InitialDatum, TimeStepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 800, &[1.0, 3.0])?);
    let r = BistableReaction::reference();
    let u0 = initial_field(grid.clone(), &InitialDatum::SinQuarter);
    let profile = DiffusivityProfile::sharp(grid.clone(), (-2f64).exp())?;
    let cfg = TimeStepConfig {
        record_every: 1,
        ..TimeStepConfig::new(5e-4, 0.5, 0.1, vec![0.0, 0.1])
    };
    let traj = solve(&grid, &profile, &r, &u0, &cfg)?;

    let e = energy_report(&traj, &profile, &r)?;
    println!("lhs {:.8} rhs {:.8} relative residual {:.2e}", e.lhs, e.rhs, e.relative_residual());
    println!("inner gradient energy {:.5} <= C1 {:.5}: {}", e.bound_inner, e.c1_bound, e.bound_holds());

    let bank = default_test_bank();
    for (phi, res) in bank.iter().zip(weak_residuals(&traj, &profile, &r, &bank)?) {
        println!("{phi:<16} {res:.3e}");
    }
    Ok(())
}
