use col_biworld::BiworldError;
use col_eval::EvalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("modal depth {depth} exceeds {max}, the most the structure's worlds determine")]
    DepthExceeded { depth: u32, max: u32 },
    #[error("common knowledge needs every world; this structure is sampled")]
    SampledStructure,
    #[error("formula contains common knowledge and has no finite modal depth")]
    InfiniteDepth,
    #[error("world #{0} is not in the structure")]
    NoSuchWorld(usize),
    #[error(transparent)]
    Biworld(#[from] BiworldError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl KripkeError {
    pub fn kind(&self) -> &'static str {
        match self {
            KripkeError::DepthExceeded { .. } => "DepthExceeded",
            KripkeError::SampledStructure => "SampledStructure",
            KripkeError::InfiniteDepth => "InfiniteDepth",
            KripkeError::NoSuchWorld(_) => "NoSuchWorld",
            KripkeError::Biworld(e) => e.kind(),
            KripkeError::Eval(e) => e.kind(),
        }
    }
}
