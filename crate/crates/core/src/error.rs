use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("block structure violation: {0}")]
    Structure(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid path: {0}")]
    Path(String),
    #[error("singular matrix in {what} (rcond {rcond:.3e})")]
    Singular { what: String, rcond: f64 },
    #[error("trajectory left the chart at t = {time}")]
    ChartEscape { time: f64 },
    #[error("branch ambiguity: {0}")]
    Branch(String),
    #[error("eigenvector basis not certified (condition number {cond:.3e}); use the fundamental-matrix route")]
    Defective { cond: f64 },
    #[error("finite-difference step inconsistent: {0}")]
    Step(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("step rejected at t = {time}: error estimate {estimate:.3e} exceeds budget {budget:.3e}")]
    StepRejected { time: f64, estimate: f64, budget: f64 },
    #[error("iteration did not converge: {0}")]
    Convergence(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Invariant,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Dimension(_)
            | Error::Domain(_)
            | Error::Structure(_)
            | Error::Parameter(_)
            | Error::Path(_) => ErrorKind::Invariant,
            _ => ErrorKind::Numerical,
        }
    }
}
