use thiserror::Error;

use crate::image::PgmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid {rows}x{cols} overflows the vertex index range")]
    SizeOverflow { rows: usize, cols: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at vertex {0}")]
    NonFinite(usize),

    #[error("dense eigensolver capacity exceeded (n = {n} > {cap}); use the grid-analytic basis")]
    Capacity { n: usize, cap: usize },

    #[error("eigensolver did not converge on eigenvalue {index} within {budget} iterations")]
    NoConvergence { index: usize, budget: usize },

    #[error("spectral invariant violated: {0}")]
    Invariant(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("explicit Euler step is unstable: dt * lambda_max = {0} > 2")]
    UnstableStep(f64),

    #[error("time {t} outside [0, {t_final}]")]
    TimeOutOfRange { t: f64, t_final: f64 },

    #[error("mode amplification exp({exponent}) exceeds the overflow guard")]
    Amplification { exponent: f64 },

    #[error("no records to tabulate")]
    EmptyRecords,

    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
