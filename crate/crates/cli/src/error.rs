use siegel_jacobi::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{0}")]
    Invariant(String),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error(transparent)]
    Library(#[from] siegel_jacobi::Error),
}

impl CliError {
    /// 1 usage/parse, 2 domain/invariant, 3 numerical.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Invariant(_) | CliError::ChecksFailed(_) => 2,
            CliError::Library(e) => match e.kind() {
                ErrorKind::Invariant => 2,
                ErrorKind::Numerical => 3,
            },
        }
    }
}
