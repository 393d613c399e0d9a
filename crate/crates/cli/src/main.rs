use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qenc_cli::config::{Command, Overrides};
use qenc_cli::run_command;

#[derive(Debug, Parser)]
#[command(name = "qenc", version, about = "Concentration experiments for PQC data encodings")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Analytic and Monte-Carlo divergence from the maximally mixed state over an (n, D) grid.
    SweepDivergence(Flags),
    /// Train the classifier on synthetic or MNIST data.
    Train(Flags),
    /// Helstrom success probability of the class averages over an (n, D) grid.
    Discriminate(Flags),
    /// Evaluate the closed-form bounds and depth thresholds.
    Bounds(Flags),
    /// Reduce an MNIST split to 16 features for a digit pair.
    MnistPrep(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, flags) = match cli.command {
        Sub::SweepDivergence(f) => (Command::SweepDivergence, f),
        Sub::Train(f) => (Command::Train, f),
        Sub::Discriminate(f) => (Command::Discriminate, f),
        Sub::Bounds(f) => (Command::Bounds, f),
        Sub::MnistPrep(f) => (Command::MnistPrep, f),
    };
    let overrides = Overrides { seed: flags.seed, out: flags.out };
    match run_command(command, &flags.config, &overrides) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qenc {}: {e}", command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
