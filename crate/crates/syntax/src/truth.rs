use std::fmt;

use thiserror::Error;

/// Three-valued truth: false, undefined, true.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    F,
    U,
    T,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("precision conflict: both t and f present")]
pub struct PrecisionConflict;

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::F, TruthValue::U, TruthValue::T];

    fn rank(self) -> u8 {
        match self {
            TruthValue::F => 0,
            TruthValue::U => 1,
            TruthValue::T => 2,
        }
    }

    /// Truth order: f <= u <= t.
    pub fn leq_t(self, other: TruthValue) -> bool {
        self.rank() <= other.rank()
    }

    /// Precision order: u below both t and f, t and f incomparable.
    pub fn leq_p(self, other: TruthValue) -> bool {
        self == TruthValue::U || self == other
    }

    pub fn inverse(self) -> TruthValue {
        match self {
            TruthValue::T => TruthValue::F,
            TruthValue::F => TruthValue::T,
            TruthValue::U => TruthValue::U,
        }
    }

    pub fn meet(self, other: TruthValue) -> TruthValue {
        if self.rank() <= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn join(self, other: TruthValue) -> TruthValue {
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn is_resolved(self) -> bool {
        self != TruthValue::U
    }

    pub fn from_bool(b: bool) -> TruthValue {
        if b {
            TruthValue::T
        } else {
            TruthValue::F
        }
    }

    pub fn as_char(self) -> char {
        match self {
            TruthValue::T => 't',
            TruthValue::F => 'f',
            TruthValue::U => 'u',
        }
    }

    pub fn parse(s: &str) -> Option<TruthValue> {
        match s {
            "t" => Some(TruthValue::T),
            "f" => Some(TruthValue::F),
            "u" => Some(TruthValue::U),
            _ => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Greatest lower bound in the truth order; `t` for an empty input.
pub fn glb_t<I: IntoIterator<Item = TruthValue>>(values: I) -> TruthValue {
    let mut acc = TruthValue::T;
    for v in values {
        acc = acc.meet(v);
        if acc == TruthValue::F {
            break;
        }
    }
    acc
}

/// Least upper bound in the precision order.
pub fn lub_p<I: IntoIterator<Item = TruthValue>>(values: I) -> Result<TruthValue, PrecisionConflict> {
    let mut acc = TruthValue::U;
    for v in values {
        match (acc, v) {
            (_, TruthValue::U) => {}
            (TruthValue::U, x) => acc = x,
            (a, b) if a == b => {}
            _ => return Err(PrecisionConflict),
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::TruthValue::*;
    use super::*;

    #[test]
    fn glb_table() {
        assert_eq!(glb_t([T, U]), U);
        assert_eq!(glb_t([]), T);
        assert_eq!(glb_t([U, F]), F);
        assert_eq!(glb_t([T, T]), T);
    }

    #[test]
    fn lub_table() {
        assert_eq!(lub_p([U, T]), Ok(T));
        assert_eq!(lub_p([U]), Ok(U));
        assert_eq!(lub_p([]), Ok(U));
        assert_eq!(lub_p([T, F]), Err(PrecisionConflict));
        assert_eq!(lub_p([F, U, F]), Ok(F));
    }

    #[test]
    fn inverse_values() {
        assert_eq!(T.inverse(), F);
        assert_eq!(U.inverse(), U);
        assert_eq!(F.inverse(), T);
    }

    #[test]
    fn orders() {
        assert!(F.leq_t(U) && U.leq_t(T) && F.leq_t(T));
        assert!(!T.leq_t(U));
        assert!(U.leq_p(T) && U.leq_p(F));
        assert!(!T.leq_p(F) && !F.leq_p(T) && !T.leq_p(U));
    }
}
