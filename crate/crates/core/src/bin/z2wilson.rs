use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use z2_wilson::cli::{execute, CliError, Command, RunConfig};

#[derive(Parser)]
#[command(name = "z2wilson", version, about = "Z(2) Wilson-loop simulations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ground state of the physical sector
    GroundState,
    /// Fidelity sweep over n_T with power-law fits
    Sweep,
    /// Hadamard-test estimate of the loop on the ground state
    Measure,
    /// Write the gate list of a loop
    ExportCircuit,
    /// Check lattice and program
    Validate,
}

#[derive(Args)]
struct Opts {
    /// Flat key = value config file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// cross | rect:WxH | lattice file
    #[arg(long, global = true, visible_alias = "lattice-file")]
    lattice: Option<String>,
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// staircase-default | empty | program file
    #[arg(long, global = true)]
    program: Option<String>,
    /// Comma-separated, strictly increasing
    #[arg(long, global = true)]
    nt: Option<String>,
    /// Shot count or "exact"
    #[arg(long, global = true)]
    shots: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    /// Fidelity for the minimum-n_T readout
    #[arg(long, global = true)]
    threshold: Option<String>,
    /// direct | ancilla | controlled | plaquette | link
    #[arg(long, global = true)]
    construction: Option<String>,
    /// Operator-fidelity trace space: sector | full:<samples>
    #[arg(long, global = true)]
    trace: Option<String>,
}

fn config(opts: &Opts) -> Result<RunConfig, CliError> {
    let mut cfg = match &opts.config {
        Some(p) => RunConfig::from_text(
            &std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
        )?,
        None => RunConfig::default(),
    };
    let overrides = [
        ("lattice", &opts.lattice),
        ("lambda", &opts.lambda),
        ("program", &opts.program),
        ("nt", &opts.nt),
        ("shots", &opts.shots),
        ("seed", &opts.seed),
        ("out", &opts.out),
        ("threshold", &opts.threshold),
        ("construction", &opts.construction),
        ("trace", &opts.trace),
    ];
    for (k, v) in overrides {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let cmd = match cli.command {
        Cmd::GroundState => Command::GroundState,
        Cmd::Sweep => Command::Sweep,
        Cmd::Measure => Command::Measure,
        Cmd::ExportCircuit => Command::ExportCircuit,
        Cmd::Validate => Command::Validate,
    };
    match config(&cli.opts).and_then(|cfg| execute(cmd, &cfg)) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("z2wilson: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
