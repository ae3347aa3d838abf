use col_biworld::BiworldError;
use col_eval::EvalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("family '{0}' is defined twice")]
    DuplicateFamily(String),
    #[error("family '{family}': {msg}")]
    InvalidFamily { family: String, msg: String },
    #[error("family '{family}', agent '{agent}': possible-set rule is not built from prev and empty")]
    UnsupportedRule { family: String, agent: String },
    #[error("family '{family}' is not a precision chain at level {level}")]
    NotAChain { family: String, level: usize },
    #[error("invalid family JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Biworld(#[from] BiworldError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl OmegaError {
    pub fn kind(&self) -> &'static str {
        match self {
            OmegaError::UnknownFamily(_) => "UnknownFamily",
            OmegaError::DuplicateFamily(_) => "DuplicateFamily",
            OmegaError::InvalidFamily { .. } => "InvalidFamily",
            OmegaError::UnsupportedRule { .. } => "UnsupportedRule",
            OmegaError::NotAChain { .. } => "NotAChain",
            OmegaError::Json(_) => "InvalidJson",
            OmegaError::Biworld(e) => e.kind(),
            OmegaError::Eval(e) => e.kind(),
        }
    }
}
