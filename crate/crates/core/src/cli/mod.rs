//! Command-line front end: `select`, `eval`, `synth` and `citest`.
//!
//! Every command resolves a [`RunConfig`] (flags, then `FAIRCFS_*`
//! environment variables, then `--config`, then defaults) and embeds it in the
//! report it writes, so a report can be fed back through `--config` to
//! reproduce itself byte for byte.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data or I/O error,
//! 4 algorithm error.

mod commands;
mod config;

use std::ffi::OsString;
use std::fmt;

use clap::{Parser, Subcommand};

pub use commands::{cmd_citest, cmd_eval, cmd_select, cmd_synth, SelectionReport, TruthSidecar};
pub use config::{load_embedded_config, Command, Opts, RunConfig, DEFAULT_FOLDS, DEFAULT_SYNTH_ROWS, ENV_PREFIX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_ALGORITHM: i32 = 4;

/// A failed run, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Config(String),
    Data(String),
    Algorithm(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Data(_) => EXIT_DATA,
            Failure::Algorithm(_) => EXIT_ALGORITHM,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Data(m) => write!(f, "data error: {m}"),
            Failure::Algorithm(m) => write!(f, "algorithm error: {m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "faircfs", version, about = "Fair causal feature selection over categorical data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Select fair causal features and write a JSON report.
    Select(Opts),
    /// Cross-validate a selector and classifier; write a CSV report.
    Eval(Opts),
    /// Sample a CSV from a Bayesian network, with a ground-truth sidecar.
    Synth(Opts),
    /// Run one G² conditional-independence test and print the result.
    Citest(Opts),
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, opts) = match &cli.command {
        CommandArgs::Select(o) => (Command::Select, o),
        CommandArgs::Eval(o) => (Command::Eval, o),
        CommandArgs::Synth(o) => (Command::Synth, o),
        CommandArgs::Citest(o) => (Command::Citest, o),
    };
    match opts.resolve(command).and_then(|cfg| dispatch(&cfg)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("faircfs: {f}");
            f.exit_code()
        }
    }
}

/// Runs a resolved configuration, inside a sized thread pool when
/// `threads` is set.
pub fn dispatch(cfg: &RunConfig) -> Result<(), Failure> {
    let go = || match cfg.command {
        Command::Select => cmd_select(cfg),
        Command::Eval => cmd_eval(cfg),
        Command::Synth => cmd_synth(cfg),
        Command::Citest => cmd_citest(cfg),
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Config(format!("cannot start {t} threads: {e}")))?
            .install(go),
        None => go(),
    }
}
