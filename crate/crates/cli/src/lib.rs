//! Command-line front end: example data, bound surfaces, fuzz campaigns and
//! convex-roof checks, written as CSV and JSON with run manifests.

// `!(x >= lo)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod output;
pub mod spec;
pub mod surface;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qmono",
    version,
    about = "Monogamy and polygamy bounds for multiqubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Concurrence values and surfaces of the generalized Schmidt example.
    Example1(commands::example1::Example1Args),
    /// SCRENoA values and the polygamy surface of the W-class example.
    Example3(commands::example3::Example3Args),
    /// Random-state or lemma-grid campaign.
    Fuzz(commands::fuzz::FuzzArgs),
    /// Bound surface of one state over a parameter grid.
    Sweep(commands::sweep::SweepArgs),
    /// Convex-roof optimization against the two-qubit closed forms.
    Oracle(commands::oracle::OracleArgs),
}

/// Worker pool sized by `QMONO_THREADS` (unset or 0: one per core).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("QMONO_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("QMONO_THREADS must be a non-negative integer, got `{v}`")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let pool = thread_pool()?;
    pool.install(|| match &cli.command {
        Command::Example1(a) => commands::example1::run(a),
        Command::Example3(a) => commands::example3::run(a),
        Command::Fuzz(a) => commands::fuzz::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Oracle(a) => commands::oracle::run(a),
    })
}
