//! Finite-level biworlds: interned per-level universes, restriction, the precision
//! order, completedness, extensions and exact level counts.

pub mod biworld;
pub mod bits;
pub mod count;
pub mod error;
pub mod json;
pub mod ops;
pub mod universe;

pub use biworld::{AgentSets, Biworld};
pub use count::{count_levels, Count, LevelCount};
pub use error::BiworldError;
pub use ops::{completed_extension, extensions, incompleted_oracle, leq_p, restrict, unique_extension, Extensions};
pub use universe::{registry_counts, Universe, DEFAULT_CAP, MAX_ATOMS};

pub use fixedbitset::FixedBitSet;

/// Builds a set of ids of the given width.
pub fn id_set(width: usize, ids: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(width);
    for i in ids {
        s.insert(i);
    }
    s
}
