use thiserror::Error;

use crate::count::Count;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiworldError {
    #[error("the agent set must not be empty")]
    NoAgents,
    #[error("too many atoms ({0}); at most {max} are supported", max = crate::universe::MAX_ATOMS)]
    TooManyAtoms(usize),
    #[error("level {level} has {count} biworlds, above the cap")]
    CapExceeded { level: usize, count: Count },
    #[error("level {level} is out of range (at most {max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("level {0} is not built in this universe")]
    UnbuiltLevel(usize),
    #[error("biworld is not completed")]
    NotCompleted,
    #[error("union condition fails for agent '{agent}': some level-{level} biworld is in neither set")]
    UnionViolation { agent: String, level: usize },
    #[error("intersection condition fails for agent '{agent}': level-{level} biworld #{id} is completed but in both sets")]
    IntersectionViolation { agent: String, level: usize, id: usize },
    #[error("biworld does not belong to this universe: {0}")]
    Foreign(String),
    #[error("invalid biworld JSON: {0}")]
    Json(String),
}

impl BiworldError {
    pub fn kind(&self) -> &'static str {
        match self {
            BiworldError::NoAgents => "NoAgents",
            BiworldError::TooManyAtoms(_) => "TooManyAtoms",
            BiworldError::CapExceeded { .. } => "CapExceeded",
            BiworldError::LevelOutOfRange { .. } => "LevelOutOfRange",
            BiworldError::UnbuiltLevel(_) => "UnbuiltLevel",
            BiworldError::NotCompleted => "NotCompleted",
            BiworldError::UnionViolation { .. } => "UnionViolation",
            BiworldError::IntersectionViolation { .. } => "IntersectionViolation",
            BiworldError::Foreign(_) => "ForeignBiworld",
            BiworldError::Json(_) => "InvalidJson",
        }
    }
}
