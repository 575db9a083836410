use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("resultant identity check failed for {0}")]
    Identity(prymcusp::solver::Stratum),
    #[error("solver failed: {0}")]
    Solver(#[from] prymcusp::solver::SolverError),
    #[error("{} mismatch(es) against the published tables", .0.len())]
    Mismatch(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::Json { .. } => 1,
            CliError::Identity(_) | CliError::Solver(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
