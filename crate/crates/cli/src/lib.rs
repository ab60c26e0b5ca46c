//! Library surface of the batch driver, shared by the binary and the
//! acceptance suite.

pub mod config;
pub mod gallery_cmd;
pub mod norms;
pub mod problem;
pub mod run;
pub mod verify;

use std::fmt;

use cyclic_projections::linalg::Vector;

/// Errors of the driver layer. Configuration and usage problems map to
/// exit code 2; everything else is a failed run (exit code 1).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Usage(String),
    Iteration(cyclic_projections::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "configuration error: {msg}"),
            Self::Usage(msg) => write!(f, "usage error: {msg}"),
            Self::Iteration(e) => write!(f, "iteration failed: {e}"),
            Self::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Usage(_) => 2,
            Self::Iteration(_) | Self::Io(_) => 1,
        }
    }
}

pub(crate) fn inner(x: &Vector<f64>, y: &Vector<f64>) -> f64 {
    cyclic_projections::linalg::inner(x, y).expect("dimensions match")
}
