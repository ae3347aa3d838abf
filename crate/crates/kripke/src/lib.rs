//! Finite-level canonical Kripke structures: worlds are the completed biworlds of one
//! level, and agent `A` reaches `w'` from `w` when the restriction of `w'` lies in `A`'s
//! possible set of `w`.

mod error;
mod only;
mod structure;

pub use error::KripkeError;
pub use only::{biworld_pi_closure, only_knows_world, pi_only_knows_world};
pub use structure::{
    accessible, canonical_worlds, entails, frame_eval, kripke_eval, pi_filter, CanonicalStructure, Entailment, Mode,
    Origin,
};
