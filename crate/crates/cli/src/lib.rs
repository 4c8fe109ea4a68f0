//! Verification suites, JSON reports and CSV tables on top of `fourier_gls`.

pub mod config;
pub mod psi_spec;
pub mod report;
pub mod suite;
pub mod tables;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{SuiteConfig, Suites};
pub use psi_spec::PsiSpec;
pub use report::{Report, Tally};
pub use suite::run_suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(#[from] fourier_gls::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for file system trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Numeric(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Exponent from a command line or config token; `inf` is accepted.
pub fn parse_exponent(s: &str) -> Result<fourier_gls::Exponent, CliError> {
    let v = match s.trim() {
        "inf" | "infinity" => f64::INFINITY,
        t => t
            .parse::<f64>()
            .map_err(|e| CliError::config(format!("bad exponent {s:?}: {e}")))?,
    };
    Ok(fourier_gls::Exponent::new(v)?)
}
