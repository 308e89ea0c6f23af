//! Front end for `relaysec-core`: SNR sweeps to CSV, the validation report
//! and the high-SNR asymptote table.
//!
//! Settings come from built-in defaults, then an optional TOML file
//! (`--config`), then command-line flags; later sources win.

use std::io;

use relaysec_core::Error as CoreError;

pub mod args;
pub mod asymptote;
pub mod file;
pub mod report;
pub mod sweep;
pub mod validate;

pub use args::{Cli, Command, RunArgs};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{failed} validation check(s) failed")]
    Validation { failed: usize },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Validation { .. } => EXIT_VALIDATION,
            CliError::Io(_) | CliError::Csv(_) => EXIT_IO,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Config(_) | CoreError::InvalidTopology(_) | CoreError::Misuse(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Runs one subcommand. CSV goes to `--output` when given, else to `stdout`;
/// the validation table always goes to `stdout`.
pub fn run<W: io::Write>(cli: &Cli, mut stdout: W) -> Result<()> {
    let (args, which) = match &cli.command {
        Command::Sweep(a) => (a, 0),
        Command::Validate(a) => (a, 1),
        Command::Asymptote(a) => (a, 2),
    };
    let cfg = args.resolve()?;
    let file = match &args.output {
        Some(path) => Some(io::BufWriter::new(std::fs::File::create(path)?)),
        None => None,
    };
    match which {
        0 => match file {
            Some(f) => sweep::run_sweep(&cfg, f).map(drop),
            None => sweep::run_sweep(&cfg, &mut stdout).map(drop),
        },
        2 => match file {
            Some(f) => asymptote::run_asymptote(&cfg, f).map(drop),
            None => asymptote::run_asymptote(&cfg, &mut stdout).map(drop),
        },
        _ => {
            let checks = validate::collect_checks(&cfg)?;
            validate::write_table(&checks, &mut stdout)?;
            if let Some(f) = file {
                validate::write_csv(&checks, f)?;
            }
            let failed = checks
                .iter()
                .filter(|c| c.verdict == validate::Verdict::Fail)
                .count();
            if failed > 0 {
                return Err(CliError::Validation { failed });
            }
            Ok(())
        }
    }
}
