use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mixture parameters: theta = {theta}, mu = {mu}")]
    InvalidParams { theta: f64, mu: f64 },

    #[error("invalid parameter-space margin eta = {0}; must lie in (0, 1/2)")]
    InvalidMargin(f64),

    #[error("diffusion time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("noise level must be strictly positive, got {0}")]
    NonPositiveTime(f64),

    #[error("location parameters differ: {0} vs {1}")]
    MismatchedMu(f64, f64),

    #[error("invalid noise schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error(
        "adaptive quadrature did not converge: achieved {achieved:e}, requested {requested:e}"
    )]
    QuadratureNotConverged { achieved: f64, requested: f64 },

    #[error("empirical risk requires at least one observation")]
    EmptyData,

    #[error("invalid optimizer spec: {0}")]
    InvalidOptimizer(String),

    #[error("invalid contrast configuration: {0}")]
    InvalidContrast(String),

    #[error("asymptotic variance overflow: numerator {numerator:e}, denominator {denominator:e}")]
    VarianceOverflow { numerator: f64, denominator: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
