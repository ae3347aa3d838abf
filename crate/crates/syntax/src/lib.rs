//! Syntax of the epistemic language with K, M, E, C and O operators,
//! ordinal modal depths and the three-valued truth lattice.

pub mod formula;
pub mod gen;
pub mod ordinal;
pub mod parse;
pub mod truth;

pub use formula::{render, Formula, Group};
pub use gen::FormulaGen;
pub use ordinal::OrdinalW2;
pub use parse::{parse, ParseError, Signature};
pub use truth::{glb_t, lub_p, PrecisionConflict, TruthValue};
