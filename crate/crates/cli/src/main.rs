use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{Context, Outcome};

#[derive(Debug, Parser)]
#[command(name = "alignkin", version, about = "Kinetic alignment model: solvers and limit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; defaults to `output_dir` from the config, then `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// `dotted.key=value` applied on top of the config file. Repeatable.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Worker threads for independent sweep points.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Allow the backward-diffusion demonstration for gamma > 1.
    #[arg(long, global = true)]
    unstable_demo: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One kinetic run; writes the trajectory as CSV.
    Simulate,
    /// Space-homogeneous relaxation of the initial means.
    Homogeneous,
    /// Initial-layer profile and its decay certificate.
    Layer,
    /// Kinetic solution against its macroscopic limit at the first epsilon.
    LimitCheck,
    /// Error against the macroscopic limit over the epsilon ladder, with order fit.
    Sweep,
    /// Grid refinement of the discrete-time microscopic scheme.
    Micro,
    /// Fast invariant suite.
    Selftest,
}

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context {
        config: cli.config,
        out: cli.out,
        overrides: cli.overrides,
        jobs: cli.jobs,
        unstable_demo: cli.unstable_demo,
    };
    let result = match cli.command {
        Command::Simulate => commands::simulate(&ctx),
        Command::Homogeneous => commands::homogeneous(&ctx),
        Command::Layer => commands::layer(&ctx),
        Command::LimitCheck => commands::limit_check(&ctx),
        Command::Sweep => commands::sweep(&ctx),
        Command::Micro => commands::micro(&ctx),
        Command::Selftest => commands::selftest(&ctx),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE })
        }
    }
}
