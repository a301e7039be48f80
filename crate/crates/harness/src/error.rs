use epkit::LinalgError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    /// A family's self-validation kept failing, e.g. a non-EP draw that came out EP.
    #[error("generator could not produce a valid {family} instance after {attempts} attempts")]
    GeneratorExhausted { family: &'static str, attempts: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
