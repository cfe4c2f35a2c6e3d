use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use growth_lab_cli::{execute, load_scenario, seed_from_env, CliResult, Command, RunOptions, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "growth-lab", version, about = "Long-run growth experiments under floor and drawdown constraints")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario file (flat `key = value` lines)
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory
    #[arg(long, default_value = "growth-lab-out")]
    out: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Overwrite a non-empty output directory
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Dump wealth and asset paths
    Simulate(Common),
    /// Expected-utility sweep over the horizons and fitted growth rate
    CerSweep(Common),
    /// Floor construction, audit and rate gap
    VerifyFloor(Common),
    /// Drawdown construction, audit and rate
    VerifyDrawdown(Common),
    /// Closed-form sandwich bounds on the drawdown value
    Asymptotics(Common),
    /// Closed-form value function at each horizon
    Value(Common),
}

fn run(cli: Cli) -> CliResult<()> {
    let (command, common) = match cli.command {
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::CerSweep(c) => (Command::CerSweep, c),
        Sub::VerifyFloor(c) => (Command::VerifyFloor, c),
        Sub::VerifyDrawdown(c) => (Command::VerifyDrawdown, c),
        Sub::Asymptotics(c) => (Command::Asymptotics, c),
        Sub::Value(c) => (Command::Value, c),
    };
    let scenario = load_scenario(&common.scenario, seed_from_env()?)?;
    let opts = RunOptions { out: common.out, workers: common.workers, force: common.force };
    let outcome = execute(command, &scenario, &opts)?;
    print!("{}", outcome.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG as u8) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("growth-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
