//! Config-driven experiment runner behind the `qenc` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

use config::{Command, Overrides};
use error::CliResult;

/// Loads the config for `command` and runs it, returning a one-line summary.
pub fn run_command(command: Command, config: &Path, flags: &Overrides) -> CliResult<String> {
    match command {
        Command::SweepDivergence => commands::sweep::run(&config::load(config, command, flags)?),
        Command::Train => commands::train::run(&config::load(config, command, flags)?),
        Command::Discriminate => commands::discriminate::run(&config::load(config, command, flags)?),
        Command::Bounds => commands::bounds::run(&config::load(config, command, flags)?),
        Command::MnistPrep => commands::mnist_prep::run(&config::load(config, command, flags)?),
    }
}
