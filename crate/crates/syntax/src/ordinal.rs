use std::fmt;

/// An ordinal below omega squared, `omega * omega_coeff + finite`.
///
/// Field order makes the derived `Ord` lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrdinalW2 {
    pub omega_coeff: u32,
    pub finite: u32,
}

impl OrdinalW2 {
    pub const ZERO: OrdinalW2 = OrdinalW2 { omega_coeff: 0, finite: 0 };

    pub fn new(omega_coeff: u32, finite: u32) -> Self {
        OrdinalW2 { omega_coeff, finite }
    }

    pub fn finite(n: u32) -> Self {
        OrdinalW2 { omega_coeff: 0, finite: n }
    }

    pub fn succ(self) -> Self {
        OrdinalW2 { omega_coeff: self.omega_coeff, finite: self.finite + 1 }
    }

    /// The smallest limit ordinal above `self`.
    pub fn plus_omega(self) -> Self {
        OrdinalW2 { omega_coeff: self.omega_coeff + 1, finite: 0 }
    }

    pub fn is_finite(self) -> bool {
        self.omega_coeff == 0
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(self) -> Option<u32> {
        if self.is_finite() {
            Some(self.finite)
        } else {
            None
        }
    }
}

impl fmt::Display for OrdinalW2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omega_coeff, self.finite) {
            (0, n) => write!(f, "{n}"),
            (1, 0) => write!(f, "w"),
            (1, n) => write!(f, "w+{n}"),
            (m, 0) => write!(f, "w*{m}"),
            (m, n) => write!(f, "w*{m}+{n}"),
        }
    }
}
