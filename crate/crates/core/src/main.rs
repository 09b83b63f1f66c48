use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sonic_patch::cli::{execute, Command, Invocation, Overrides};

/// Supersonic-sonic patch solver.
#[derive(Debug, Parser)]
#[command(name = "sonic-patch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check the wall data against the admissibility hypotheses.
    Check(Common),
    /// Build the patch and write nodes, curves and the diagnostics report.
    Solve(Common),
    /// Run the oracle, manufactured, residual and Hölder checks.
    Verify(Common),
    /// Run the refinement study and report observed orders.
    Converge(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Level spacing in t.
    #[arg(long)]
    dt: Option<f64>,
    /// Last marched level before the sonic line.
    #[arg(long = "t-min")]
    t_min: Option<f64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed of the random oracle samples.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of halvings in the refinement study.
    #[arg(long, value_name = "N")]
    refine: Option<usize>,
    /// Negate V̄ before the inversion (fault injection for the invariant checks).
    #[arg(long, hide = true)]
    inject_sign_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Solve(c) => (Command::Solve, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Converge(c) => (Command::Converge, c),
    };
    let inv = Invocation {
        config: c.config,
        overrides: Overrides { dt: c.dt, t_min: c.t_min, out: c.out, seed: c.seed, refine: c.refine },
        flip_v_sign: c.inject_sign_fault,
    };
    match execute(command, &inv) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for path in &outcome.artifacts {
                println!("wrote {}", path.display());
            }
            ExitCode::from(outcome.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code())
        }
    }
}
