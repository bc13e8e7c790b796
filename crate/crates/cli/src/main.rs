use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jumpbot_cli::commands::{
    cmd_evaluate, cmd_optimize, cmd_simulate, cmd_sweep, load_config, parse_step, parse_var,
    CliError,
};
use jumpbot_core::optimize::Objective;

/// Design, simulate and optimize spring-loaded jumping microrobots.
///
/// Exit codes: 0 success, 1 internal failure, 2 invalid input,
/// 3 no feasible design.
#[derive(Parser)]
#[command(name = "jumpbot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Design file (TOML); the built-in baseline when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flight integration step, e.g. "10 us" (bare numbers are seconds).
    #[arg(long)]
    step: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    ApexHeight,
    JumpRate,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derivation chain from spring to flight for one design.
    Evaluate {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate one load-and-jump cycle; writes wind.csv and flight.csv.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Vary one field over a range; writes CSV to stdout (and sweep.csv with --out).
    Sweep {
        #[command(flatten)]
        common: Common,
        /// field:lower:upper[:log], e.g. drive.amplitude:0.5V:1.0V
        #[arg(long)]
        var: String,
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Search for the best design; writes best_design.toml and history.csv.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Design variable field:lower:upper[:log]; repeatable. Overrides the
        /// variables of the configuration's [optimize] section.
        #[arg(long)]
        var: Vec<String>,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let step = |c: &Common| c.step.as_deref().map(parse_step).transpose();
    match cli.command {
        Command::Evaluate { common } => {
            let step = step(&common)?;
            let config = load_config(common.config.as_deref())?;
            cmd_evaluate(&config, common.out.as_deref(), step)
        }
        Command::Simulate { common } => {
            let step = step(&common)?;
            let config = load_config(common.config.as_deref())?;
            cmd_simulate(&config, common.out.as_deref(), step)
        }
        Command::Sweep {
            common,
            var,
            points,
        } => {
            let step = step(&common)?;
            let var = parse_var(&var)?;
            let config = load_config(common.config.as_deref())?;
            cmd_sweep(&config, &var, points, common.out.as_deref(), step)
        }
        Command::Optimize {
            common,
            var,
            objective,
            seed,
        } => {
            let vars = var
                .iter()
                .map(|v| parse_var(v))
                .collect::<Result<Vec<_>, _>>()?;
            let config = load_config(common.config.as_deref())?;
            let objective = objective.map(|o| match o {
                ObjectiveArg::ApexHeight => Objective::ApexHeight,
                ObjectiveArg::JumpRate => Objective::JumpRate,
            });
            cmd_optimize(&config, &vars, objective, seed, common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
