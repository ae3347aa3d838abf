//! Rule-defined families of biworlds of length omega: each family fixes an objective and,
//! per agent, set expressions that produce the next level from the current one.

mod error;
mod example;
mod family;
mod survivors;
mod system;

pub use error::OmegaError;
pub use example::{example3_world, Example3, LevelEvidence, Verdict};
pub use family::{AgentRules, SetExpr, SymbolicFamily};
pub use survivors::{cg_survivors, cg_survivors_lifted};
pub use system::{OmegaValue, SymbolicSystem, DEFAULT_K_MAX};
