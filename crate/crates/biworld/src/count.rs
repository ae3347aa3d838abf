use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Largest exponent of 3 that is evaluated exactly.
const MAX_POW3_EXP: u64 = 1 << 22;
/// Largest exponent of 2 that is evaluated exactly (a shift).
const MAX_SHIFT: u64 = 1 << 28;

/// An exact count, or a lower bound `2^bits` when the exact value is too large to hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Count {
    Exact(BigUint),
    AtLeastPow2(u64),
}

impl Count {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Count::Exact(n) => Some(n),
            Count::AtLeastPow2(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact().and_then(|n| n.to_u64())
    }

    /// True if the count is certainly larger than `cap`.
    pub fn exceeds(&self, cap: u64) -> bool {
        match self {
            Count::Exact(n) => *n > BigUint::from(cap),
            Count::AtLeastPow2(b) => *b >= 64 || (1u64 << b) > cap,
        }
    }

    pub fn bits(&self) -> u64 {
        match self {
            Count::Exact(n) => n.bits(),
            Count::AtLeastPow2(b) => *b + 1,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(n) if n.bits() <= 256 => write!(f, "{n}"),
            Count::Exact(n) => write!(f, "<exact, {} bits>", n.bits()),
            Count::AtLeastPow2(b) => write!(f, ">=2^{b}"),
        }
    }
}

/// Total, completed and incompleted counts at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub level: usize,
    pub total: Count,
    pub completed: Count,
    pub incompleted: Count,
}

fn pow2(e: &BigUint) -> Option<BigUint> {
    let e = e.to_u64().filter(|e| *e <= MAX_SHIFT)?;
    Some(BigUint::one() << e)
}

fn pow3(e: &BigUint) -> Option<BigUint> {
    let e = e.to_u64().filter(|e| *e <= MAX_POW3_EXP)?;
    Some(BigUint::from(3u32).pow(e as u32))
}

fn log2_lower(n: &Count) -> u64 {
    match n {
        Count::Exact(n) if n.is_zero() => 0,
        Count::Exact(n) => n.bits() - 1,
        Count::AtLeastPow2(b) => *b,
    }
}

/// Level sizes by the closed-form recurrence, for levels `0..=max_level`.
///
/// Requires at least one agent. Values too large to evaluate are reported as lower bounds.
pub fn count_levels(n_atoms: usize, n_agents: usize, max_level: usize) -> Vec<LevelCount> {
    assert!(n_agents >= 1, "at least one agent is required");
    let n0 = BigUint::one() << n_atoms;
    let agents = BigUint::from(n_agents);
    let mut out = vec![LevelCount {
        level: 0,
        total: Count::Exact(n0.clone()),
        completed: Count::Exact(BigUint::zero()),
        incompleted: Count::Exact(n0.clone()),
    }];
    for k in 0..max_level {
        let prev = &out[k];
        let total = match (&prev.completed, &prev.incompleted) {
            (Count::Exact(c), Count::Exact(i)) => {
                let ce = c * &agents;
                let ie = i * &agents;
                match (pow2(&ce), pow3(&ie)) {
                    (Some(a), Some(b)) => Count::Exact(&n0 * a * b),
                    _ => Count::AtLeastPow2(n_atoms as u64 + ce.to_u64().unwrap_or(u64::MAX).min(u64::MAX / 2)),
                }
            }
            _ => Count::AtLeastPow2(log2_lower(&prev.total).saturating_mul(2)),
        };
        let completed = match &prev.total {
            Count::Exact(n) => match pow2(&(n * &agents)) {
                Some(p) => Count::Exact(&n0 * p),
                None => Count::AtLeastPow2(
                    (n_atoms as u64).saturating_add((n * &agents).to_u64().unwrap_or(u64::MAX / 2)),
                ),
            },
            Count::AtLeastPow2(b) => Count::AtLeastPow2(b.saturating_mul(2)),
        };
        let incompleted = match (&total, &completed) {
            (Count::Exact(n), Count::Exact(c)) => Count::Exact(n - c),
            _ => Count::AtLeastPow2(log2_lower(&prev.total)),
        };
        // a level whose total is only bounded still has at least as many members as its completed part
        let total = match (&total, &completed) {
            (Count::AtLeastPow2(b), c) => Count::AtLeastPow2((*b).max(log2_lower(c))),
            _ => total,
        };
        out.push(LevelCount { level: k + 1, total, completed, incompleted });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(c: &Count) -> u64 {
        c.to_u64().unwrap()
    }

    #[test]
    fn one_atom_one_agent() {
        let c = count_levels(1, 1, 2);
        assert_eq!(exact(&c[0].total), 2);
        assert_eq!(exact(&c[1].total), 18);
        assert_eq!(exact(&c[1].completed), 8);
        assert_eq!(exact(&c[1].incompleted), 10);
        assert_eq!(exact(&c[2].total), 30_233_088);
        assert_eq!(exact(&c[2].completed), 524_288);
    }

    #[test]
    fn no_atoms() {
        let c = count_levels(0, 1, 3);
        let got: Vec<(u64, u64, u64)> =
            c.iter().map(|l| (exact(&l.total), exact(&l.completed), exact(&l.incompleted))).collect();
        assert_eq!(got, vec![(1, 0, 1), (3, 2, 1), (12, 8, 4), (20_736, 4096, 16_640)]);
    }

    #[test]
    fn two_atoms() {
        let c = count_levels(2, 1, 1);
        assert_eq!(exact(&c[1].total), 324);
        assert_eq!(exact(&c[1].completed), 64);
    }

    #[test]
    fn huge_levels_are_bounded() {
        let c = count_levels(1, 1, 4);
        assert!(c[3].completed.exact().is_some());
        assert!(matches!(c[3].total, Count::AtLeastPow2(_)));
        assert!(c[3].total.exceeds(1_000_000));
        assert!(c[4].completed.exceeds(u64::MAX));
    }
}
