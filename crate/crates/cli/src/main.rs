//! `mixedic`: command-line front end for the mixed strong/very strong
//! interference channel toolkit.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or
//! configuration errors.

mod commands;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixedic::SampleMode;

#[derive(Debug, Parser)]
#[command(
    name = "mixedic",
    version,
    about = "Rate regions, redundancy checks and random-coding simulation for three-user Gaussian interference networks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Channel config JSON file. Defaults to the built-in worked example.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Very strong transmitter at receivers 1, 2, 3 (1-based), e.g. `3,1,2`.
    /// Defaults to the first role split that satisfies the hypotheses.
    #[arg(long, value_delimiter = ',')]
    assignment: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Mac,
    Outer,
    StrongOuter,
    Capacity,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Redundancy,
    Theorem,
    AppendixB,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every cross link and list the valid role splits.
    Classify {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Export a rate region as half-spaces, optionally with vertices.
    Region {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Include the enumerated vertex set.
        #[arg(long)]
        vertices: bool,
        /// Transmitter set for `--which mac` (1-based), e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// Receiver for `--which mac` (1-based).
        #[arg(long)]
        receiver: Option<usize>,
    },
    /// Check redundancy claims, region equalities or the redundancy chain.
    Verify {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Run over this many sampled configs instead of one config.
        #[arg(long)]
        samples: Option<usize>,
        /// Sampler seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample configs that satisfy or violate the hypotheses.
        #[arg(long, default_value = "satisfy")]
        sample_mode: SampleMode,
    },
    /// Monte Carlo block-error estimate of the two-stage decoder.
    Simulate {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Rates in bits per channel use, e.g. `0.5,0.5,0.5`.
        #[arg(long, value_delimiter = ',', required = true)]
        rates: Vec<f64>,
        /// Block length.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in worked example end to end.
    Figure2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    match commands::run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{}", out.document) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                _ => {}
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
