//! Runs a named preset at reduced resolution and prints its summary.
//!
//! `cargo run --release --example run_preset -- fig3_limit_comparison /tmp/fig3`

use std::path::PathBuf;

use hetero_rd::harness::{run_preset, Overrides, Preset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("fig2_snapshots").parse()?;
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(preset.name()));
    let manifest = run_preset(
        preset,
        &Overrides {
            n_cells: Some(800),
            output_dir: Some(out.clone()),
            ..Overrides::default()
        },
    )?;
    for run in &manifest.runs {
        println!("{:<20} {:<6} {} steps {:.2}s", run.run, run.status, run.steps, run.wall_time_s);
    }
    for f in &manifest.files {
        println!("{}  {}", &f.sha256[..12], out.join(&f.name).display());
    }
    Ok(())
}
