use col_biworld::BiworldError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("biworld does not belong to this universe: {0}")]
    Foreign(#[from] BiworldError),
    #[error("atom '{0}' is not in the universe's vocabulary")]
    UnknownAtom(String),
    #[error("agent '{0}' is not in the universe's agent set")]
    UnknownAgent(String),
}

impl EvalError {
    pub fn kind(&self) -> &'static str {
        match self {
            EvalError::Foreign(_) => "ForeignBiworld",
            EvalError::UnknownAtom(_) => "UnknownAtom",
            EvalError::UnknownAgent(_) => "UnknownAgent",
        }
    }
}
