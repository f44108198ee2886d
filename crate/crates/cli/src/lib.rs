//! Command-line front end. [`run`] takes the argument list and two output
//! streams and returns the process exit code:
//! 0 success, 1 bad input, 2 refused by a condition check, 3 internal error
//! (including a failed verification suite).

mod commands;
mod records;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphlet_gibbs::exact::{parse_rational, RandomSource, Rational};
use graphlet_gibbs::{Error, ErrorKind};

pub use records::{GraphletRecord, PolymerRecord, PottsRecord};

pub const SEED_ENV: &str = "GRAPHLET_GIBBS_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "graphlet-gibbs",
    version,
    about = "Perfect samplers for weighted graphlets, polymer models and spin systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SampleOpts {
    /// Number of samples to draw.
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    /// Seed; falls back to the environment, then to fresh entropy.
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Worker threads. Output does not depend on this.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Uniform,
    Hardcore,
    Potts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Rooted,
    Unrooted,
    Polymer,
    Hardcore,
    Potts,
    Subtrees,
    Estimator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Enumerate all polymers (small hosts only).
    Exhaustive,
    /// Closed-form counting bound.
    Analytic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graphlets containing a fixed root.
    SampleRooted {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: usize,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long, default_value_t = 1)]
        colors: u32,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Non-empty graphlets anywhere in the graph.
    SampleUnrooted {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Configurations of a subset polymer model.
    SamplePolymer {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "uniform")]
        model: Model,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long, default_value_t = 1)]
        colors: u32,
        #[arg(long, value_parser = rational)]
        theta: Option<Rational>,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Independent sets of a bipartite graph (hard-core model).
    SampleHardcore {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Colorings from the low-temperature Potts model on an expander.
    SamplePotts {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: u32,
        #[arg(long, value_parser = rational)]
        beta: Rational,
        /// Edge expansion of the graph, as attested by the caller.
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Evaluates the sampling conditions for a model without sampling.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, value_parser = rational)]
        lambda: Option<Rational>,
        #[arg(long, default_value_t = 1)]
        colors: u32,
        #[arg(long, value_parser = rational)]
        theta: Option<Rational>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_parser = rational)]
        beta: Option<Rational>,
        #[arg(long, value_parser = rational)]
        alpha: Option<Rational>,
    },
    /// Compares a sampler against its exact law on built-in fixtures.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        /// TV tolerance; defaults to 0.015 (0.02 for potts).
        #[arg(long)]
        threshold: Option<f64>,
        /// Estimator suite: independent runs per graph.
        #[arg(long, default_value_t = 10)]
        runs: u64,
    },
    /// Estimates the rooted partition function from exact samples.
    EstimateZ {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: usize,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
    },
}

#[derive(Debug)]
pub(crate) enum CliError {
    Lib(Error),
    Io(std::io::Error),
    Input(String),
    /// A condition evaluated to false in `check`.
    CheckFailed,
    VerifyFailed(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// The source behind `seed`, or a fresh one whose seed is reported.
pub(crate) fn source(seed: Option<u64>) -> RandomSource {
    match seed {
        Some(s) => RandomSource::new(s),
        None => RandomSource::from_entropy(),
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match commands::execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let code = match &e {
                CliError::Lib(inner) => {
                    let _ = writeln!(err, "error: {inner}");
                    match inner.kind() {
                        ErrorKind::Input => 1,
                        ErrorKind::Refused => 2,
                        ErrorKind::Internal => 3,
                    }
                }
                CliError::Io(inner) => {
                    let _ = writeln!(err, "error: {inner}");
                    3
                }
                CliError::Input(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    1
                }
                CliError::CheckFailed => 2,
                CliError::VerifyFailed(n) => {
                    let _ = writeln!(err, "verification failed: {n} case(s)");
                    3
                }
            };
            let _ = out.flush();
            code
        }
    }
}
