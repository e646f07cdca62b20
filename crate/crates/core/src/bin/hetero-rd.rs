use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hetero_rd::harness::{
    load_spec, parse_epsilon, run_spec, validate_spec, ExperimentSpec, HarnessError, Overrides,
    Preset,
};

#[derive(Parser)]
#[command(name = "hetero-rd", version, about = "Heterogeneous reaction-diffusion experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write its artifacts.
    Run {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated, e.g. `e-1,e-4,0.5`.
        #[arg(long, value_delimiter = ',', value_parser = parse_epsilon)]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(e: &HarnessError) -> ExitCode {
    match e {
        HarnessError::Parse { .. } | HarnessError::Validation(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn resolve(preset: Option<String>, config: Option<PathBuf>) -> Result<ExperimentSpec, HarnessError> {
    let spec = match &config {
        Some(path) => load_spec(path)?,
        None => {
            let name = preset.as_deref().ok_or_else(|| {
                HarnessError::Validation(vec!["either --preset or --config is required".into()])
            })?;
            ExperimentSpec::preset(name.parse::<Preset>()?)
        }
    };
    if let (Some(name), Some(_)) = (&preset, &config) {
        let p: Preset = name.parse()?;
        if spec.preset != Some(p) {
            return Err(HarnessError::Validation(vec![format!(
                "--preset {p} conflicts with the config file"
            )]));
        }
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { config } => load_spec(&config).and_then(|s| {
            validate_spec(&s)?;
            println!("{}: ok", config.display());
            Ok(())
        }),
        Command::Run {
            preset,
            config,
            out,
            eps,
            nx,
            dt,
            t_end,
            workers,
        } => {
            let overrides = Overrides {
                epsilons: eps,
                n_cells: nx,
                dt,
                t_end,
                workers,
                output_dir: out,
            };
            resolve(preset, config)
                .and_then(|spec| run_spec(&spec, &overrides))
                .map(|m| {
                    println!(
                        "{}: {} runs, {} files in {} ({:.1} s)",
                        m.preset,
                        m.runs.len(),
                        m.files.len() + 1,
                        m.spec.output_dir.display(),
                        m.wall_time_s
                    );
                })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
