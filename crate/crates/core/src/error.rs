use thiserror::Error;

/// Errors raised by the model, the analysis routines and the I/O layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("operation requires fully symmetric parameters (gamma1=gamma2, tau1=tau2, n1=n2, k1=k2)")]
    NotSymmetric,

    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),

    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("orbit did not return to the section within {budget} steps")]
    NoReturn { budget: usize },

    #[error("no root found: {0}")]
    NoRoot(String),

    #[error("curve undefined: {0}")]
    CurveUndefined(String),

    #[error("state ({x1}, {x2}) is not in the interior of region 1")]
    NotSmooth { x1: f64, x2: f64 },

    #[error("fixed point record is virtual")]
    VirtualRecord,

    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("table is not rectangular: row {row} has {got} cells, header has {want}")]
    Ragged { row: usize, got: usize, want: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
