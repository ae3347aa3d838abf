use std::cmp::Ordering;

use col_biworld::{completed_extension, AgentSets, Biworld, BiworldError, FixedBitSet, Universe};
use col_syntax::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::KripkeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    /// `count` worlds: the completed extensions of the level-k registry, topped up with
    /// uniformly random completed worlds.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Exhaustive,
    Sampled,
    /// Substructure kept by `pi_filter`.
    Filtered { from_exhaustive: bool },
}

/// Worlds are completed level-(k+1) biworlds, stored as an objective plus one possible
/// set per agent (the impossible set is its complement). Each world also carries its
/// class: the id of its restriction to level k.
pub struct CanonicalStructure<'u> {
    u: &'u Universe,
    k: usize,
    origin: Origin,
    objs: Vec<u64>,
    poss: Vec<FixedBitSet>,
    classes: Vec<usize>,
}

impl std::fmt::Debug for CanonicalStructure<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CanonicalStructure")
            .field("base_level", &self.k)
            .field("origin", &self.origin)
            .field("worlds", &self.len())
            .finish()
    }
}

fn key_cmp(oa: u64, a: &[FixedBitSet], ob: u64, b: &[FixedBitSet]) -> Ordering {
    oa.cmp(&ob).then_with(|| a.iter().map(|s| s.as_slice()).cmp(b.iter().map(|s| s.as_slice())))
}

/// The canonical structure whose worlds are the completed level-(k+1) biworlds.
pub fn canonical_worlds<'u>(u: &'u Universe, k: usize, cap: u64, mode: Mode) -> Result<CanonicalStructure<'u>, KripkeError> {
    u.require_level(k)?;
    let m = u.n_agents();
    let width = u.size(k);
    let mut worlds: Vec<(u64, Vec<FixedBitSet>)> = Vec::new();
    let origin = match mode {
        Mode::Exhaustive => {
            let count = u.counts(k + 1).pop().unwrap().completed;
            if count.exceeds(cap) || width * m >= 63 {
                return Err(BiworldError::CapExceeded { level: k + 1, count }.into());
            }
            let bits = width * m;
            for obj in 0..u.size(0) as u64 {
                for c in 0..1u64 << bits {
                    let sets = (0..m)
                        .map(|a| {
                            let mut s = FixedBitSet::with_capacity(width);
                            for y in 0..width {
                                if (c >> (a * width + y)) & 1 == 1 {
                                    s.insert(y);
                                }
                            }
                            s
                        })
                        .collect();
                    worlds.push((obj, sets));
                }
            }
            Origin::Exhaustive
        }
        Mode::Sampled { count, seed } => {
            for id in 0..u.size(k).min(count) {
                let w = completed_extension(u, &u.get(k, id))?;
                worlds.push((w.obj(), w.agents().iter().map(|s| s.poss.clone()).collect()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while worlds.len() < count {
                let obj = rng.gen_range(0..u.size(0)) as u64;
                let sets = (0..m)
                    .map(|_| {
                        let mut s = FixedBitSet::with_capacity(width);
                        for y in 0..width {
                            s.set(y, rng.gen_bool(0.5));
                        }
                        s
                    })
                    .collect();
                worlds.push((obj, sets));
            }
            Origin::Sampled
        }
    };
    worlds.sort_by(|a, b| key_cmp(a.0, &a.1, b.0, &b.1));
    worlds.dedup();
    let mut s = CanonicalStructure { u, k, origin, objs: Vec::new(), poss: Vec::new(), classes: Vec::new() };
    for (obj, sets) in worlds {
        let class = s.class_of(obj, &sets);
        s.objs.push(obj);
        s.classes.push(class);
        s.poss.extend(sets);
    }
    Ok(s)
}

impl<'u> CanonicalStructure<'u> {
    fn class_of(&self, obj: u64, sets: &[FixedBitSet]) -> usize {
        if self.k == 0 {
            return obj as usize;
        }
        let agents = sets
            .iter()
            .map(|p| {
                let mut imp = p.clone();
                imp.toggle_range(..);
                AgentSets::new(self.u.restrict_set(self.k, p), self.u.restrict_set(self.k, &imp))
            })
            .collect();
        self.u.lookup(&Biworld::from_parts(self.k, obj, agents)).expect("restriction of a world is registered")
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    /// Base level k; worlds live at level k+1.
    pub fn base_level(&self) -> usize {
        self.k
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.origin, Origin::Sampled | Origin::Filtered { from_exhaustive: false })
    }

    pub fn len(&self) -> usize {
        self.objs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objs.is_empty()
    }

    fn m(&self) -> usize {
        self.u.n_agents()
    }

    fn n_classes(&self) -> usize {
        self.u.size(self.k)
    }

    pub fn obj(&self, i: usize) -> u64 {
        self.objs[i]
    }

    /// Id at level k of the restriction of world `i`.
    pub fn class(&self, i: usize) -> usize {
        self.classes[i]
    }

    pub fn poss(&self, i: usize, a: usize) -> &FixedBitSet {
        &self.poss[i * self.m() + a]
    }

    pub fn world(&self, i: usize) -> Biworld {
        let agents = (0..self.m())
            .map(|a| {
                let p = self.poss(i, a).clone();
                let mut imp = p.clone();
                imp.toggle_range(..);
                AgentSets::new(p, imp)
            })
            .collect();
        Biworld::from_parts(self.k + 1, self.objs[i], agents)
    }

    pub fn index_of(&self, w: &Biworld) -> Option<usize> {
        if w.level() != self.k + 1 || !w.is_completed() || w.agents().iter().any(|s| s.poss.len() != self.n_classes()) {
            return None;
        }
        let sets: Vec<FixedBitSet> = w.agents().iter().map(|s| s.poss.clone()).collect();
        let m = self.m();
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match key_cmp(self.objs[mid], &self.poss[mid * m..(mid + 1) * m], w.obj(), &sets) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Classes that contain at least one world of the structure.
    fn present(&self) -> FixedBitSet {
        let mut p = FixedBitSet::with_capacity(self.n_classes());
        self.classes.iter().for_each(|&c| p.insert(c));
        p
    }

    /// Classes holding a world outside `set`, and classes holding a world inside it.
    fn class_split(&self, set: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        let mut notall = FixedBitSet::with_capacity(self.n_classes());
        let mut some = FixedBitSet::with_capacity(self.n_classes());
        for (i, &c) in self.classes.iter().enumerate() {
            if set.contains(i) {
                some.insert(c);
            } else {
                notall.insert(c);
            }
        }
        (notall, some)
    }

    /// Union over `agents` of the possible sets of world `i`.
    fn step(&self, i: usize, agents: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n_classes());
        agents.iter().for_each(|&a| s.union_with(self.poss(i, a)));
        s
    }

    /// Least set containing `bad` and every class with a successor inside it.
    fn backward_closure(&self, bad: FixedBitSet, agents: &[usize]) -> FixedBitSet {
        let mut succ = vec![FixedBitSet::with_capacity(self.n_classes()); self.n_classes()];
        for i in 0..self.len() {
            succ[self.classes[i]].union_with(&self.step(i, agents));
        }
        let mut closed = bad;
        loop {
            let mut changed = false;
            for v in 0..self.n_classes() {
                if !closed.contains(v) && !succ[v].is_disjoint(&closed) {
                    closed.insert(v);
                    changed = true;
                }
            }
            if !changed {
                return closed;
            }
        }
    }

    fn agent(&self, name: &str) -> Result<usize, KripkeError> {
        self.u.agent_index(name).ok_or_else(|| col_eval::EvalError::UnknownAgent(name.to_string()).into())
    }

    fn check(&self, phi: &Formula, guard_depth: bool) -> Result<(), KripkeError> {
        for a in phi.atoms() {
            if self.u.atom_index(&a).is_none() {
                return Err(col_eval::EvalError::UnknownAtom(a).into());
            }
        }
        for a in phi.agents() {
            self.agent(&a)?;
        }
        match phi.finite_depth() {
            Some(d) if guard_depth && d as usize > self.k + 1 => {
                Err(KripkeError::DepthExceeded { depth: d, max: self.k as u32 + 1 })
            }
            None if self.is_sampled() => Err(KripkeError::SampledStructure),
            _ => Ok(()),
        }
    }

    /// The worlds where `phi` holds. C-free formulas must have modal depth at most k+1.
    pub fn truth_set(&self, phi: &Formula) -> Result<FixedBitSet, KripkeError> {
        self.check(phi, true)?;
        self.set(phi)
    }

    /// As `truth_set`, without the depth guard: plain two-valued evaluation over the
    /// structure as a frame, whether or not it agrees with the biworld valuation.
    pub fn frame_truth_set(&self, phi: &Formula) -> Result<FixedBitSet, KripkeError> {
        self.check(phi, false)?;
        self.set(phi)
    }

    fn set(&self, phi: &Formula) -> Result<FixedBitSet, KripkeError> {
        let n = self.len();
        let from = |f: &dyn Fn(usize) -> bool| {
            let mut s = FixedBitSet::with_capacity(n);
            (0..n).filter(|&i| f(i)).for_each(|i| s.insert(i));
            s
        };
        Ok(match phi {
            Formula::Atom(p) => {
                let bit = self.u.atom_index(p).unwrap();
                from(&|i| (self.objs[i] >> bit) & 1 == 1)
            }
            Formula::True => from(&|_| true),
            Formula::False => FixedBitSet::with_capacity(n),
            Formula::Not(x) => {
                let mut s = self.set(x)?;
                s.toggle_range(..);
                s
            }
            Formula::And(a, b) => {
                let mut s = self.set(a)?;
                s.intersect_with(&self.set(b)?);
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.set(a)?;
                s.union_with(&self.set(b)?);
                s
            }
            Formula::Implies(a, b) => {
                let mut s = self.set(a)?;
                s.toggle_range(..);
                s.union_with(&self.set(b)?);
                s
            }
            Formula::K(a, x) => {
                let a = self.agent(a)?;
                let (notall, _) = self.class_split(&self.set(x)?);
                from(&|i| self.poss(i, a).is_disjoint(&notall))
            }
            Formula::M(a, x) => {
                let a = self.agent(a)?;
                let (_, some) = self.class_split(&self.set(x)?);
                from(&|i| some.is_subset(self.poss(i, a)))
            }
            Formula::O(a, x) => {
                let a = self.agent(a)?;
                let (notall, some) = self.class_split(&self.set(x)?);
                from(&|i| self.poss(i, a).is_disjoint(&notall) && some.is_subset(self.poss(i, a)))
            }
            Formula::E(g, x) => {
                let agents: Vec<usize> = g.members().iter().map(|a| self.agent(a)).collect::<Result<_, _>>()?;
                let (notall, _) = self.class_split(&self.set(x)?);
                from(&|i| agents.iter().all(|&a| self.poss(i, a).is_disjoint(&notall)))
            }
            Formula::C(g, x) => {
                let agents: Vec<usize> = g.members().iter().map(|a| self.agent(a)).collect::<Result<_, _>>()?;
                let (notall, _) = self.class_split(&self.set(x)?);
                let unsafe_ = self.backward_closure(notall, &agents);
                from(&|i| self.step(i, &agents).is_disjoint(&unsafe_))
            }
        })
    }

    /// Worlds that are positively introspective: for every agent, whatever is reachable in
    /// two steps is reachable in one.
    pub fn pi_worlds(&self) -> FixedBitSet {
        let m = self.m();
        let present = self.present();
        let mut two_step = vec![FixedBitSet::with_capacity(self.n_classes()); self.n_classes() * m];
        for i in 0..self.len() {
            for a in 0..m {
                two_step[self.classes[i] * m + a].union_with(self.poss(i, a));
            }
        }
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in 0..self.len() {
            let ok = (0..m).all(|a| {
                let mut reach = FixedBitSet::with_capacity(self.n_classes());
                for v in self.poss(i, a).ones() {
                    reach.union_with(&two_step[v * m + a]);
                }
                reach.intersect_with(&present);
                reach.is_subset(self.poss(i, a))
            });
            out.set(i, ok);
        }
        out
    }

    /// PI worlds all of whose reachable worlds are PI.
    pub fn recursively_pi_worlds(&self) -> FixedBitSet {
        let pi = self.pi_worlds();
        let mut bad = FixedBitSet::with_capacity(self.n_classes());
        for i in 0..self.len() {
            if !pi.contains(i) {
                bad.insert(self.classes[i]);
            }
        }
        let all: Vec<usize> = (0..self.m()).collect();
        let unsafe_ = self.backward_closure(bad, &all);
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in pi.ones() {
            if self.step(i, &all).is_disjoint(&unsafe_) {
                out.insert(i);
            }
        }
        out
    }

    fn subset(&self, keep: &FixedBitSet, origin: Origin) -> CanonicalStructure<'u> {
        let m = self.m();
        let mut s = CanonicalStructure { u: self.u, k: self.k, origin, objs: Vec::new(), poss: Vec::new(), classes: Vec::new() };
        for i in keep.ones() {
            s.objs.push(self.objs[i]);
            s.classes.push(self.classes[i]);
            s.poss.extend_from_slice(&self.poss[i * m..(i + 1) * m]);
        }
        s
    }

    /// Structure export: the base level and every world as biworld JSON.
    pub fn to_json(&self) -> Value {
        let worlds: Vec<Value> = (0..self.len()).map(|i| col_biworld::json::to_json(self.u, &self.world(i))).collect();
        json!({ "base_level": self.k, "sampled": self.is_sampled(), "worlds": worlds })
    }
}

/// Whether agent `a` reaches world `j` from world `i`.
pub fn accessible(s: &CanonicalStructure, i: usize, j: usize, a: usize) -> bool {
    s.poss(i, a).contains(s.class(j))
}

pub fn kripke_eval(phi: &Formula, i: usize, s: &CanonicalStructure) -> Result<bool, KripkeError> {
    if i >= s.len() {
        return Err(KripkeError::NoSuchWorld(i));
    }
    Ok(s.truth_set(phi)?.contains(i))
}

pub fn frame_eval(phi: &Formula, i: usize, s: &CanonicalStructure) -> Result<bool, KripkeError> {
    if i >= s.len() {
        return Err(KripkeError::NoSuchWorld(i));
    }
    Ok(s.frame_truth_set(phi)?.contains(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entailment {
    pub holds: bool,
    /// A world satisfying every premise but not the conclusion.
    pub countermodel: Option<usize>,
    /// Set when the structure is a sample, so a positive verdict is not conclusive.
    pub advisory: bool,
}

pub fn entails(gamma: &[Formula], phi: &Formula, s: &CanonicalStructure) -> Result<Entailment, KripkeError> {
    let mut sat = FixedBitSet::with_capacity(s.len());
    sat.insert_range(..);
    for g in gamma {
        sat.intersect_with(&s.truth_set(g)?);
    }
    sat.difference_with(&s.truth_set(phi)?);
    let countermodel = sat.ones().next();
    Ok(Entailment { holds: countermodel.is_none(), countermodel, advisory: s.is_sampled() && countermodel.is_none() })
}

/// The substructure of recursively positively introspective worlds.
pub fn pi_filter<'u>(s: &CanonicalStructure<'u>) -> CanonicalStructure<'u> {
    let from_exhaustive = !s.is_sampled();
    s.subset(&s.recursively_pi_worlds(), Origin::Filtered { from_exhaustive })
}
