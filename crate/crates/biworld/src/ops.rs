use std::ops::Range;

use fixedbitset::FixedBitSet;

use crate::biworld::{AgentSets, Biworld};
use crate::error::BiworldError;
use crate::universe::Universe;

/// Restriction of `w` to level `alpha`.
pub fn restrict(u: &Universe, w: &Biworld, alpha: usize) -> Result<Biworld, BiworldError> {
    if alpha > w.level() {
        return Err(BiworldError::LevelOutOfRange { level: alpha, max: w.level() });
    }
    let mut cur = w.clone();
    while cur.level() > alpha {
        cur = u.restrict_once(&cur)?;
    }
    Ok(cur)
}

/// Precision order: `w` is the restriction of `w2` to `w`'s level.
pub fn leq_p(u: &Universe, w: &Biworld, w2: &Biworld) -> bool {
    w.level() <= w2.level() && restrict(u, w2, w.level()).map(|r| r == *w).unwrap_or(false)
}

/// One block of elements whose states are enumerated together. For a lower-level id `x`
/// in both sets, the block is the fiber of `x` and must reach both sides.
///
/// Digits: 0 possible only, 1 impossible only, 2 both (only for incompleted elements).
struct Block<'a> {
    u: &'a Universe,
    level: usize,
    agent: usize,
    elems: Range<usize>,
    digits: Vec<u8>,
    /// Digits other than 1 and other than 0, kept so validity is O(1).
    n_poss: usize,
    n_imp: usize,
    /// Digits at positions at or above this are zero.
    touched: usize,
    need_both: bool,
}

impl<'a> Block<'a> {
    fn new(u: &'a Universe, level: usize, agent: usize, elems: Range<usize>, need_both: bool) -> Self {
        let len = elems.len();
        Block { u, level, agent, elems, digits: vec![0; len], n_poss: len, n_imp: 0, touched: 0, need_both }
    }

    fn radix(&self, j: usize) -> u8 {
        if self.level > 0 && self.u.is_completed_id(self.level, self.elems.start + j) {
            2
        } else {
            3
        }
    }

    fn set(&mut self, j: usize, d: u8) {
        let old = self.digits[j];
        self.n_poss = self.n_poss + usize::from(d != 1) - usize::from(old != 1);
        self.n_imp = self.n_imp + usize::from(d != 0) - usize::from(old != 0);
        self.digits[j] = d;
        if d != 0 {
            self.touched = self.touched.max(j + 1);
        }
    }

    fn valid(&self) -> bool {
        !self.need_both || (self.n_poss > 0 && self.n_imp > 0)
    }

    /// Steps the odometer to the next valid state; false once it wraps.
    fn advance(&mut self) -> bool {
        loop {
            let mut j = 0;
            loop {
                if j == self.digits.len() {
                    return false;
                }
                let d = self.digits[j] + 1;
                if d < self.radix(j) {
                    self.set(j, d);
                    break;
                }
                self.set(j, 0);
                j += 1;
            }
            if self.valid() {
                return true;
            }
        }
    }

    fn reset(&mut self) -> bool {
        for j in 0..self.touched {
            self.set(j, 0);
        }
        self.touched = 0;
        self.valid() || self.advance()
    }
}

/// Lazily enumerates the one-level extensions of a biworld.
///
/// When the next level is built, extensions come from the registry in id order;
/// otherwise they are generated by an odometer over the per-element states.
pub struct Extensions<'a> {
    inner: ExtInner<'a>,
}

enum ExtInner<'a> {
    Registry { u: &'a Universe, level: usize, ids: Range<usize>, current: usize },
    Odometer {
        obj: u64,
        level: usize,
        width: usize,
        base: Vec<AgentSets>,
        blocks: Vec<Block<'a>>,
        state: OdoState,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OdoState {
    Fresh,
    Running,
    Done,
}

impl<'a> Extensions<'a> {
    pub fn new(u: &'a Universe, w: &Biworld) -> Result<Extensions<'a>, BiworldError> {
        u.validate(w)?;
        let k = w.level();
        u.require_level(k)?;
        if u.has_level(k + 1) {
            let id = u.lookup(w).ok_or_else(|| BiworldError::Foreign("not a registered biworld".into()))?;
            let ids = u.fiber(k + 1, id);
            return Ok(Extensions { inner: ExtInner::Registry { u, level: k + 1, current: ids.start, ids } });
        }
        let n = u.size(k);
        let mut base = Vec::new();
        let mut blocks = Vec::new();
        for a in 0..u.n_agents() {
            let mut poss = FixedBitSet::with_capacity(n);
            let mut imp = FixedBitSet::with_capacity(n);
            if k == 0 {
                blocks.push(Block::new(u, 0, a, 0..n, false));
            } else {
                let s = w.agent(a);
                for x in 0..u.size(k - 1) {
                    let fib = u.fiber(k, x);
                    match (s.poss.contains(x), s.imp.contains(x)) {
                        (true, false) => poss.insert_range(fib),
                        (false, true) => imp.insert_range(fib),
                        (true, true) => blocks.push(Block::new(u, k, a, fib, true)),
                        (false, false) => unreachable!("validated biworld"),
                    }
                }
            }
            base.push(AgentSets::new(poss, imp));
        }
        Ok(Extensions {
            inner: ExtInner::Odometer { obj: w.obj(), level: k + 1, width: n, base, blocks, state: OdoState::Fresh },
        })
    }

    /// Moves to the next extension without building it; false when exhausted.
    fn step(&mut self) -> bool {
        match &mut self.inner {
            ExtInner::Registry { ids, current, .. } => {
                if let Some(id) = ids.next() {
                    *current = id;
                    true
                } else {
                    false
                }
            }
            ExtInner::Odometer { blocks, state, .. } => match *state {
                OdoState::Done => false,
                OdoState::Fresh => {
                    if blocks.iter_mut().all(Block::reset) {
                        *state = OdoState::Running;
                        true
                    } else {
                        *state = OdoState::Done;
                        false
                    }
                }
                OdoState::Running => {
                    for j in 0..blocks.len() {
                        if blocks[j].advance() {
                            return true;
                        }
                        blocks[j].reset();
                    }
                    *state = OdoState::Done;
                    false
                }
            },
        }
    }

    fn build(&self) -> Biworld {
        match &self.inner {
            ExtInner::Registry { u, level, current, .. } => u.get(*level, *current),
            ExtInner::Odometer { obj, level, width, base, blocks, .. } => {
                let mut agents = base.clone();
                for b in blocks.iter() {
                    let s = &mut agents[b.agent];
                    for (y, &d) in b.elems.clone().zip(&b.digits) {
                        if d != 1 {
                            s.poss.insert(y);
                        }
                        if d != 0 {
                            s.imp.insert(y);
                        }
                    }
                }
                debug_assert!(agents.iter().all(|s| s.poss.len() == *width));
                Biworld::from_parts(*level, *obj, agents)
            }
        }
    }

    /// Number of extensions, stopping at `limit`, without materializing them.
    pub fn count_up_to(mut self, limit: usize) -> usize {
        let mut n = 0;
        while n < limit && self.step() {
            n += 1;
        }
        n
    }
}

impl Iterator for Extensions<'_> {
    type Item = Biworld;

    fn next(&mut self) -> Option<Biworld> {
        if self.step() {
            Some(self.build())
        } else {
            None
        }
    }
}

/// Up to `limit` distinct extensions of `w` to the next level.
pub fn extensions(u: &Universe, w: &Biworld, limit: usize) -> Result<Vec<Biworld>, BiworldError> {
    Ok(Extensions::new(u, w)?.take(limit).collect())
}

/// Incompletedness by definition: two distinct extensions exist.
pub fn incompleted_oracle(u: &Universe, w: &Biworld) -> Result<bool, BiworldError> {
    Ok(Extensions::new(u, w)?.count_up_to(2) == 2)
}

/// A completed extension of `w` one level up. At level 0 every agent considers everything
/// possible; above, each lower-level id in both sets keeps its least extension on the
/// impossible side only.
pub fn completed_extension(u: &Universe, w: &Biworld) -> Result<Biworld, BiworldError> {
    u.validate(w)?;
    let k = w.level();
    u.require_level(k)?;
    let agents = if k == 0 {
        (0..u.n_agents()).map(|_| AgentSets::new(u.full_set(0), u.empty_set(0))).collect()
    } else {
        w.agents()
            .iter()
            .map(|s| {
                let mut poss = u.empty_set(k);
                for x in s.poss.ones() {
                    let fib = u.fiber(k, x);
                    // a lower id in both sets keeps its least extension impossible only
                    let from = if s.imp.contains(x) { fib.start + 1 } else { fib.start };
                    poss.insert_range(from..fib.end);
                }
                let mut imp = poss.clone();
                imp.toggle_range(..);
                AgentSets::new(poss, imp)
            })
            .collect()
    };
    Ok(Biworld::from_parts(k + 1, w.obj(), agents))
}

/// The only extension of a completed biworld.
pub fn unique_extension(u: &Universe, w: &Biworld) -> Result<Biworld, BiworldError> {
    if !w.is_completed() {
        return Err(BiworldError::NotCompleted);
    }
    u.validate(w)?;
    let k = w.level();
    u.require_level(k)?;
    let agents = w
        .agents()
        .iter()
        .map(|s| AgentSets::new(u.extend_set(k, &s.poss), u.extend_set(k, &s.imp)))
        .collect();
    Ok(Biworld::from_parts(k + 1, w.obj(), agents))
}
