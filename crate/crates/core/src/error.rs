use thiserror::Error;

use crate::media::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate {x} lies outside the window [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("scale value {u} lies outside the scale image [{lo}, {hi}]")]
    OutOfImage { u: f64, lo: f64, hi: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("medium failed validation:\n{0}")]
    Invalid(ValidationReport),

    #[error("grid spacing {h} is not smaller than the narrowest piece ({narrowest})")]
    SpacingTooLarge { h: f64, narrowest: f64 },

    #[error("coordinate {x} is not a grid node")]
    NotANode { x: f64 },

    #[error("window ({lo}, {hi}) straddles the interface at {interface}")]
    StraddlesInterface { lo: f64, hi: f64, interface: f64 },

    #[error("window ({lo}, {hi}) contains no grid node")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("left-side occupation at the interface {x} is zero; ratio undefined")]
    UndefinedRatio { x: f64 },

    #[error("tridiagonal solve broke down at row {row} (pivot {pivot:e}, dt {dt:e})")]
    SolverBreakdown { row: usize, pivot: f64, dt: f64 },

    #[error("unknown local-time notion `{0}`")]
    UnknownNotion(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("check `{name}`: {source}")]
    Check { name: String, source: Box<Error> },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error stems from the configuration or arguments rather
    /// than from a numerical failure; the CLI maps these to exit code 2.
    pub fn is_config(&self) -> bool {
        match self {
            Error::SolverBreakdown { .. } | Error::UndefinedRatio { .. } | Error::OutOfImage { .. } => false,
            Error::Check { source, .. } => source.is_config(),
            _ => true,
        }
    }
}
