use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge with {nodes} nodes (last estimate {estimate})")]
    ConvergenceFailure { nodes: usize, estimate: Complex64 },

    #[error("ODE solution blew up at t = {t}")]
    BlowUp { t: f64 },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("squeeze matrix left the unit disk at t = {t} (kappa = {kappa})")]
    DiskExit { t: f64, kappa: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
