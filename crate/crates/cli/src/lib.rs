//! Command-line layer: attack files, curve CSV and the five subcommands.

pub mod commands;
pub mod error;
pub mod formats;
pub mod verify;

pub use commands::{demo, report, simulate, sweep_cmd, Output, Protocol, SweepArgs};
pub use error::CliError;
pub use formats::{curve_csv, load_attack, parse_attack, parse_grid, AttackFile};
pub use verify::{run_suites, verify, verify_with, SuiteResult};
