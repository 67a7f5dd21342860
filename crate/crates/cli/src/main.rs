use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pingpong_cli::{CliError, Output, Protocol, SweepArgs};
use pingpong_core::{EncodingSet, Mode, Objective};

#[derive(Parser)]
#[command(
    name = "pingpong",
    version,
    about = "Ping-pong protocol eavesdropping analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Simplified,
    Bell,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Iz,
    Paulis,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    I0t,
    I0a,
    I0c,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, value_enum, default_value = "simplified")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "iz")]
    encoding: EncodingArg,
}

impl ProtocolArgs {
    fn protocol(&self) -> Protocol {
        Protocol {
            mode: match self.mode {
                ModeArg::Simplified => Mode::Simplified,
                ModeArg::Bell => Mode::Bell,
            },
            encoding: match self.encoding {
                EncodingArg::Iz => EncodingSet::Iz,
                EncodingArg::Paulis => EncodingSet::Paulis,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropies of the built-in counterexample attack.
    Demo,
    /// Information report for an attack file.
    Report {
        file: PathBuf,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of the detection probability.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maximize information over attacks at each detection target.
    Sweep {
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "i0t")]
        objective: Vec<ObjectiveArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long, default_value_t = 2)]
        ancilla_dim: usize,
        #[arg(long)]
        restarts: Option<usize>,
        /// Objective evaluations per restart.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Run the invariant suites.
    Verify,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Demo => pingpong_cli::demo(),
        Command::Report {
            file,
            protocol,
            json,
        } => pingpong_cli::report(&file, protocol.protocol(), json),
        Command::Simulate {
            file,
            protocol,
            rounds,
            seed,
        } => pingpong_cli::simulate(&file, protocol.protocol(), rounds, seed),
        Command::Sweep {
            grid,
            objective,
            seed,
            out,
            protocol,
            ancilla_dim,
            restarts,
            budget,
        } => {
            let mut args = SweepArgs::new(grid, out);
            args.objectives = objective
                .into_iter()
                .map(|o| match o {
                    ObjectiveArg::I0t => Objective::I0t,
                    ObjectiveArg::I0a => Objective::I0a,
                    ObjectiveArg::I0c => Objective::I0c,
                })
                .collect();
            args.seed = seed;
            args.protocol = protocol.protocol();
            args.ancilla_dim = ancilla_dim;
            args.restarts = restarts;
            args.budget = budget;
            pingpong_cli::sweep_cmd(&args)
        }
        Command::Verify => Ok(pingpong_cli::verify()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
