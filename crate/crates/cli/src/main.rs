//! `vines`: batch front end for impact absorber design.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use commands::{CliError, Run};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "vines", version, about = "Impact absorber design for flexible hosts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML), or the manifest of an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output` in the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for clearance jobs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// No-op. Every computation is deterministic; results do not depend on
    /// the thread count.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Modal table and physical setup.
    Modes,
    /// Two-step calibration of the pulse parameters.
    Calibrate,
    /// Efficacy curve and optimum design.
    Design,
    /// Stepped-sine reference simulation over the clearance grid.
    Sweep,
    /// Design and reference sweep side by side.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Calibrate => "calibrate",
            Command::Design => "design",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::benchmark(0.01, 0.0204),
    };
    let run = Run::new(config, cli.out.clone())?;
    run.start(cli.command.name())?;
    match cli.command {
        Command::Modes => commands::modes(&run),
        Command::Calibrate => commands::calibration(&run).map(|_| ()),
        Command::Design => commands::design(&run).map(|_| ()),
        Command::Sweep => commands::sweep(&run),
        Command::Validate => commands::validate(&run),
    }?;
    eprintln!("wrote {}", run.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
