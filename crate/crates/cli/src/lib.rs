//! Command-line front end for `gmlab-core`.
//!
//! Exit statuses: 0 success, 1 usage error, 2 numerical guard (singular
//! evaluation point, or any warning under `--strict`), 3 I/O error.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 1.0)` deliberately rejects NaN

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use thiserror::Error;

pub use commands::{execute, Outcome};
pub use config::{parse_config, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical guard: {0}")]
    Numerical(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<gmlab_core::Error> for CliError {
    fn from(e: gmlab_core::Error) -> Self {
        match e {
            gmlab_core::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Parses, runs and writes; returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(argv) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Clap(clap_err) => {
                    let _ = clap_err.print();
                }
                other => eprintln!("gmlab: {other}"),
            }
            e.exit_code()
        }
    }
}

fn run<I, T>(argv: I) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = parse_config(argv)?;
    let outcome = execute(&cfg)?;
    output::write_report(&outcome.content, cfg.out.as_deref())?;
    for w in &outcome.warnings {
        eprintln!("gmlab: warning: {w}");
    }
    if cfg.out.is_some() {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    Ok(if cfg.strict && !outcome.warnings.is_empty() {
        2
    } else {
        0
    })
}
