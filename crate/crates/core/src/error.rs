use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside the range an operation supports.
    #[error("{name} = {value} is outside the supported range {range}")]
    Domain {
        name: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("{function} has a pole at s = {at}")]
    Pole { function: &'static str, at: String },

    #[error("resource budget exceeded: {what} needs {requested}, limit is {limit}")]
    Budget {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("invalid convex chain at vertex {index}: {reason}")]
    InvalidChain { index: usize, reason: String },

    #[error("{what} did not converge (achieved error estimate {achieved:e})")]
    Convergence { what: &'static str, achieved: f64 },

    #[error("requested {requested} zeta zeros but only {available} are available")]
    NotEnoughZeros { requested: usize, available: usize },

    #[error("zeta zero at gamma = {gamma} looks multiple: |zeta'(rho)| = {derivative:e}")]
    MultipleZero { gamma: f64, derivative: f64 },

    #[error(
        "no chain ending at ({n}, {n}) after {draws} draws \
         (expected acceptance rate {expected_rate:e})"
    )]
    Exhausted {
        n: u64,
        draws: u64,
        expected_rate: f64,
    },

    #[error("cache {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, range: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            range,
        }
    }
}
