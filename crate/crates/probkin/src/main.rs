use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use probkin::cli::{exit_code, expand_sweep, parse_config, run, Mode, OutputFormat};
use probkin::Error;

/// Quantum states as probability vectors, evolved by kinetic equations.
///
/// Exit codes: 0 ok, 2 schema error, 3 non-admissible state,
/// 4 invalid Kraus set, 5 numerical failure.
#[derive(Parser)]
#[command(name = "probkin", version, about)]
struct Args {
    /// Run mode: map | evolve | gksl | channel | qudit | oscillator.
    /// Must match the config's "mode" field.
    mode: String,

    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Override the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config's output format (csv | json).
    #[arg(long)]
    format: Option<String>,

    /// Override the config's integration step.
    #[arg(long)]
    step: Option<f64>,

    /// Override the config's final time.
    #[arg(long = "t-final")]
    t_final: Option<f64>,

    /// Sweep a numeric field over a grid: <field>=<start>:<stop>:<count>,
    /// writing one indexed output file per grid point.
    #[arg(long)]
    sweep: Option<String>,
}

fn execute(args: &Args) -> Result<(), Error> {
    let mode = args.mode.parse::<Mode>().map_err(|_| Error::Schema {
        violations: vec![format!("mode argument: unknown value '{}'", args.mode)],
    })?;

    let text = std::fs::read_to_string(&args.config)?;
    let mut config = parse_config(&text)?;
    if config.mode != mode {
        return Err(Error::Schema {
            violations: vec![format!(
                "mode: config says '{}' but the command line says '{}'",
                config.mode.as_str(),
                mode.as_str()
            )],
        });
    }

    if let Some(out) = &args.out {
        config.output_path = out.to_string_lossy().into_owned();
    }
    if let Some(format) = &args.format {
        config.output_format = format.parse::<OutputFormat>().map_err(|_| Error::Schema {
            violations: vec![format!("format argument: unknown value '{format}'")],
        })?;
    }
    if let Some(step) = args.step {
        config.step = step;
    }
    if let Some(t_final) = args.t_final {
        config.t_final = t_final;
    }

    let configs = match &args.sweep {
        Some(sweep) => expand_sweep(&config, sweep)?,
        None => vec![config],
    };
    for cfg in &configs {
        let summary = run(cfg)?;
        println!(
            "wrote {} ({} rows) and {}",
            summary.trajectory_path.display(),
            summary.rows,
            summary.metadata_path.display()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
