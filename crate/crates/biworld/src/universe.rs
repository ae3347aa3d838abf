use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Range;

use col_syntax::Signature;
use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::biworld::{AgentSets, Biworld};
use crate::bits::{get_bit, get_chunk, lex_cmp_range, lex_rank, range_to_set, set_bit, set_into_range};
use crate::count::{count_levels, LevelCount};
use crate::error::BiworldError;

pub const MAX_ATOMS: usize = 16;
pub const DEFAULT_CAP: u64 = 1_000_000;

/// One level of the registry. Records are packed bit strings:
/// `[obj | poss_0 | imp_0 | poss_1 | imp_1 | ...]`, each set `lower` bits wide.
#[derive(Clone, Debug)]
struct Level {
    size: usize,
    lower: usize,
    width: usize,
    data: Vec<u64>,
    completed: FixedBitSet,
    /// For level >= 1: children of lower-level id `x` are `fiber_start[x]..fiber_start[x+1]`.
    fiber_start: Vec<usize>,
}

/// All biworlds up to some level over a fixed vocabulary and agent set.
///
/// Ids are ordered by restriction to the level below first, then by objective and the
/// per-agent (poss, imp) sets compared as sorted id lists. The children of a biworld
/// therefore occupy a contiguous id range at the next level.
#[derive(Clone, Debug)]
pub struct Universe {
    sig: Signature,
    levels: Vec<Level>,
}

impl Universe {
    pub fn build(sig: &Signature, max_level: usize, cap: u64) -> Result<Universe, BiworldError> {
        if sig.agents.is_empty() {
            return Err(BiworldError::NoAgents);
        }
        if sig.atoms.len() > MAX_ATOMS {
            return Err(BiworldError::TooManyAtoms(sig.atoms.len()));
        }
        let counts = count_levels(sig.atoms.len(), sig.agents.len(), max_level);
        for c in &counts {
            if c.total.exceeds(cap) {
                return Err(BiworldError::CapExceeded { level: c.level, count: c.total.clone() });
            }
        }
        let n0 = 1usize << sig.atoms.len();
        let mut u = Universe {
            sig: sig.clone(),
            levels: vec![Level {
                size: n0,
                lower: 0,
                width: 1,
                data: Vec::new(),
                completed: FixedBitSet::with_capacity(n0),
                fiber_start: Vec::new(),
            }],
        };
        for k in 0..max_level {
            let next = u.build_next(k);
            debug_assert_eq!(Some(next.size as u64), counts[k + 1].total.to_u64());
            u.levels.push(next);
        }
        Ok(u)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn atoms(&self) -> &[String] {
        &self.sig.atoms
    }

    pub fn agents(&self) -> &[String] {
        &self.sig.agents
    }

    pub fn n_agents(&self) -> usize {
        self.sig.agents.len()
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.sig.agents.iter().position(|a| a == name)
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.sig.atoms.iter().position(|a| a == name)
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn size(&self, level: usize) -> usize {
        self.levels[level].size
    }

    pub fn counts(&self, max_level: usize) -> Vec<LevelCount> {
        count_levels(self.sig.atoms.len(), self.sig.agents.len(), max_level)
    }

    pub fn has_level(&self, level: usize) -> bool {
        level < self.levels.len()
    }

    pub fn require_level(&self, level: usize) -> Result<(), BiworldError> {
        if self.has_level(level) {
            Ok(())
        } else {
            Err(BiworldError::UnbuiltLevel(level))
        }
    }

    fn poss_off(&self, level: usize, a: usize) -> usize {
        self.sig.atoms.len() + 2 * a * self.levels[level].lower
    }

    fn imp_off(&self, level: usize, a: usize) -> usize {
        self.poss_off(level, a) + self.levels[level].lower
    }

    fn record(&self, level: usize, id: usize) -> &[u64] {
        let l = &self.levels[level];
        &l.data[id * l.width..(id + 1) * l.width]
    }

    pub fn is_completed_id(&self, level: usize, id: usize) -> bool {
        self.levels[level].completed.contains(id)
    }

    pub fn completed_count(&self, level: usize) -> usize {
        self.levels[level].completed.count_ones(..)
    }

    /// Objective of a registered biworld.
    pub fn obj_of(&self, level: usize, id: usize) -> u64 {
        if level == 0 {
            id as u64
        } else {
            get_chunk(self.record(level, id), 0, self.sig.atoms.len())
        }
    }

    pub fn get(&self, level: usize, id: usize) -> Biworld {
        if level == 0 {
            return Biworld::interpretation(id as u64);
        }
        let rec = self.record(level, id);
        let lower = self.levels[level].lower;
        let agents = (0..self.n_agents())
            .map(|a| {
                AgentSets::new(
                    range_to_set(rec, self.poss_off(level, a), lower),
                    range_to_set(rec, self.imp_off(level, a), lower),
                )
            })
            .collect();
        Biworld::from_parts(level, self.obj_of(level, id), agents)
    }

    /// Ids of the possible set of agent `a` of a registered biworld.
    pub fn poss_ids(&self, level: usize, id: usize, a: usize) -> Vec<usize> {
        self.ids_in(level, id, self.poss_off(level, a))
    }

    pub fn imp_ids(&self, level: usize, id: usize, a: usize) -> Vec<usize> {
        self.ids_in(level, id, self.imp_off(level, a))
    }

    fn ids_in(&self, level: usize, id: usize, off: usize) -> Vec<usize> {
        let rec = self.record(level, id);
        let lower = self.levels[level].lower;
        (0..lower).filter(|&i| get_bit(rec, off + i)).collect()
    }

    /// Id at `level - 1` of the restriction of registered biworld `id`.
    pub fn parent(&self, level: usize, id: usize) -> usize {
        assert!(level >= 1);
        let fs = &self.levels[level].fiber_start;
        fs.partition_point(|&s| s <= id) - 1
    }

    /// Ids at `level` of the registered biworlds that restrict to `parent` at `level - 1`.
    pub fn fiber(&self, level: usize, parent: usize) -> Range<usize> {
        let fs = &self.levels[level].fiber_start;
        fs[parent]..fs[parent + 1]
    }

    /// Restriction of registered biworld `id` at `level` down to `to`.
    pub fn restrict_id(&self, level: usize, id: usize, to: usize) -> usize {
        let mut l = level;
        let mut i = id;
        while l > to {
            i = self.parent(l, i);
            l -= 1;
        }
        i
    }

    fn cmp_records(&self, level: usize, a: &[u64], b: &[u64]) -> Ordering {
        cmp_packed(self.sig.atoms.len(), self.n_agents(), self.levels[level].lower, a, b)
    }

    /// Packs a biworld at `level >= 1` whose sets range over level `level - 1`.
    fn pack(&self, w: &Biworld) -> Vec<u64> {
        let level = w.level();
        let lower = self.size(level - 1);
        let bits = self.sig.atoms.len() + 2 * self.n_agents() * lower;
        let mut rec = vec![0u64; bits.div_ceil(64).max(1)];
        rec[0] |= w.obj();
        for (a, s) in w.agents().iter().enumerate() {
            let po = self.sig.atoms.len() + 2 * a * lower;
            set_into_range(&mut rec, po, &s.poss);
            set_into_range(&mut rec, po + lower, &s.imp);
        }
        rec
    }

    /// Checks that `w` is a well-formed biworld over this universe. Its level may be at
    /// most one above the highest built level.
    pub fn validate(&self, w: &Biworld) -> Result<(), BiworldError> {
        let n0 = self.size(0) as u64;
        if w.obj() >= n0 {
            return Err(BiworldError::Foreign(format!("objective {:#b} mentions undeclared atoms", w.obj())));
        }
        if w.level() == 0 {
            return Ok(());
        }
        let below = w.level() - 1;
        if !self.has_level(below) {
            return Err(BiworldError::UnbuiltLevel(below));
        }
        if w.agents().len() != self.n_agents() {
            return Err(BiworldError::Foreign(format!(
                "{} agent entries, expected {}",
                w.agents().len(),
                self.n_agents()
            )));
        }
        let n = self.size(below);
        for (a, s) in w.agents().iter().enumerate() {
            if s.poss.len() != n || s.imp.len() != n {
                return Err(BiworldError::Foreign(format!("set width differs from |W^{below}| = {n}")));
            }
            if s.poss.union_count(&s.imp) != n {
                return Err(BiworldError::UnionViolation { agent: self.sig.agents[a].clone(), level: below });
            }
            if below > 0 {
                for id in s.poss.intersection(&s.imp) {
                    if self.is_completed_id(below, id) {
                        return Err(BiworldError::IntersectionViolation {
                            agent: self.sig.agents[a].clone(),
                            level: below,
                            id,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Registry id of `w`, if its level is built and it is a member.
    pub fn lookup(&self, w: &Biworld) -> Option<usize> {
        if !self.has_level(w.level()) {
            return None;
        }
        if w.level() == 0 {
            return (w.obj() < self.size(0) as u64).then_some(w.obj() as usize);
        }
        if self.validate(w).is_err() {
            return None;
        }
        let parent = self.lookup(&self.restrict_once(w).ok()?)?;
        let range = self.fiber(w.level(), parent);
        let rec = self.pack(w);
        let level = w.level();
        let (mut lo, mut hi) = (range.start, range.end);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.cmp_records(level, self.record(level, mid), &rec) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, w: &Biworld) -> bool {
        self.lookup(w).is_some()
    }

    /// Restriction by one level; the sets of `w` must range over a built level.
    pub fn restrict_once(&self, w: &Biworld) -> Result<Biworld, BiworldError> {
        match w.level() {
            0 => Err(BiworldError::LevelOutOfRange { level: 0, max: 0 }),
            1 => Ok(Biworld::interpretation(w.obj())),
            k => {
                let below = k - 1;
                self.require_level(below)?;
                let agents = w
                    .agents()
                    .iter()
                    .map(|s| AgentSets::new(self.restrict_set(below, &s.poss), self.restrict_set(below, &s.imp)))
                    .collect();
                Ok(Biworld::from_parts(below, w.obj(), agents))
            }
        }
    }

    /// `{x|_{level-1} : x in s}` for a set `s` of level-`level` ids.
    pub fn restrict_set(&self, level: usize, s: &FixedBitSet) -> FixedBitSet {
        let n = self.size(level - 1);
        let mut out = FixedBitSet::with_capacity(n);
        for y in 0..n {
            let r = self.fiber(level, y);
            if !r.is_empty() && s.contains_any_in_range(r) {
                out.insert(y);
            }
        }
        out
    }

    /// `{x in W^level : x|_{level-1} in s}` for a set `s` of level-`(level-1)` ids.
    pub fn extend_set(&self, level: usize, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size(level));
        for y in s.ones() {
            out.insert_range(self.fiber(level, y));
        }
        out
    }

    pub fn full_set(&self, level: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.size(level));
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self, level: usize) -> FixedBitSet {
        FixedBitSet::with_capacity(self.size(level))
    }

    /// Iterates the registered biworlds of a level in id order.
    pub fn iter_level(&self, level: usize) -> impl Iterator<Item = Biworld> + '_ {
        (0..self.size(level)).map(move |i| self.get(level, i))
    }

    /// A biworld at `level <= max_level + 1`, uniform over all biworlds of that level.
    pub fn random_biworld<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<Biworld, BiworldError> {
        let obj = rng.gen_range(0..self.size(0)) as u64;
        if level == 0 {
            return Ok(Biworld::interpretation(obj));
        }
        let below = level - 1;
        self.require_level(below)?;
        let n = self.size(below);
        let agents = (0..self.n_agents())
            .map(|_| {
                let mut poss = FixedBitSet::with_capacity(n);
                let mut imp = FixedBitSet::with_capacity(n);
                for y in 0..n {
                    let radix = if below > 0 && self.is_completed_id(below, y) { 2 } else { 3 };
                    match rng.gen_range(0..radix) {
                        0 => poss.insert(y),
                        1 => imp.insert(y),
                        _ => {
                            poss.insert(y);
                            imp.insert(y);
                        }
                    }
                }
                AgentSets::new(poss, imp)
            })
            .collect();
        Ok(Biworld::from_parts(level, obj, agents))
    }

    fn build_next(&self, k: usize) -> Level {
        let nsig = self.sig.atoms.len();
        let nag = self.n_agents();
        let lower = self.size(k);
        let bits = nsig + 2 * nag * lower;
        let width = bits.div_ceil(64).max(1);
        let mut data: Vec<u64> = Vec::new();
        let mut fiber_start = vec![0usize; lower + 1];
        let mut cache: HashMap<(usize, usize), Vec<Vec<u64>>> = HashMap::new();
        let mut count = 0usize;
        let poss_off = |a: usize| nsig + 2 * a * lower;
        let imp_off = |a: usize| nsig + 2 * a * lower + lower;
        for v in 0..lower {
            fiber_start[v] = count;
            let mut base = vec![0u64; width];
            base[0] |= self.obj_of(k, v);
            let mut groups: Vec<Vec<Vec<u64>>> = Vec::new();
            for a in 0..nag {
                if k == 0 {
                    let elems: Vec<usize> = (0..lower).collect();
                    let radix = vec![3u8; lower];
                    groups.push(assignments(&elems, &radix, poss_off(a), imp_off(a), width, false));
                    continue;
                }
                let ps = self.poss_ids(k, v, a);
                let is = self.imp_ids(k, v, a);
                let below = self.size(k - 1);
                for x in 0..below {
                    let fib = self.fiber(k, x);
                    match (ps.binary_search(&x).is_ok(), is.binary_search(&x).is_ok()) {
                        (true, false) => fib.for_each(|y| set_bit(&mut base, poss_off(a) + y)),
                        (false, true) => fib.for_each(|y| set_bit(&mut base, imp_off(a) + y)),
                        (true, true) => {
                            let opts = cache.entry((a, x)).or_insert_with(|| {
                                let elems: Vec<usize> = fib.clone().collect();
                                let radix: Vec<u8> =
                                    elems.iter().map(|&y| if self.is_completed_id(k, y) { 2 } else { 3 }).collect();
                                assignments(&elems, &radix, poss_off(a), imp_off(a), width, true)
                            });
                            groups.push(opts.clone());
                        }
                        (false, false) => unreachable!("registered biworld violates the union condition"),
                    }
                }
            }
            let start = data.len();
            let mut idx = vec![0usize; groups.len()];
            let mut rec = base.clone();
            'product: loop {
                rec.copy_from_slice(&base);
                for (g, &i) in groups.iter().zip(&idx) {
                    for (w, m) in rec.iter_mut().zip(&g[i]) {
                        *w |= *m;
                    }
                }
                data.extend_from_slice(&rec);
                count += 1;
                let mut j = 0;
                loop {
                    if j == groups.len() {
                        break 'product;
                    }
                    idx[j] += 1;
                    if idx[j] < groups[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
            sort_fiber(nsig, nag, lower, width, &mut data[start..]);
        }
        fiber_start[lower] = count;
        let mut completed = FixedBitSet::with_capacity(count);
        for id in 0..count {
            let rec = &data[id * width..(id + 1) * width];
            let done = (0..nag).all(|a| {
                let mut p = 0;
                while p < lower {
                    let n = (lower - p).min(64);
                    if get_chunk(rec, poss_off(a) + p, n) & get_chunk(rec, imp_off(a) + p, n) != 0 {
                        return false;
                    }
                    p += n;
                }
                true
            });
            completed.set(id, done);
        }
        Level { size: count, lower, width, data, completed, fiber_start }
    }
}

/// Orders packed records by objective, then per agent by the (poss, imp) sets
/// compared as sorted id lists.
fn cmp_packed(nsig: usize, nag: usize, lower: usize, a: &[u64], b: &[u64]) -> Ordering {
    let oa = get_chunk(a, 0, nsig);
    let ob = get_chunk(b, 0, nsig);
    if oa != ob {
        return oa.cmp(&ob);
    }
    for ag in 0..nag {
        let po = nsig + 2 * ag * lower;
        for off in [po, po + lower] {
            match lex_cmp_range(a, b, off, lower) {
                Ordering::Equal => {}
                o => return o,
            }
        }
    }
    Ordering::Equal
}

fn sort_fiber(nsig: usize, nag: usize, lower: usize, width: usize, recs: &mut [u64]) {
    let cmp = |a: &[u64], b: &[u64]| cmp_packed(nsig, nag, lower, a, b);
    if width == 1 {
        // objective first, then each set's lexicographic rank, most significant first;
        // the key has as many bits as the record, so it fits a u64 too
        let key = |r: u64| -> u64 {
            let words = [r];
            let mut k = get_chunk(&words, 0, nsig);
            for off in (0..2 * nag).map(|i| nsig + i * lower) {
                k = (k << lower) | lex_rank(get_chunk(&words, off, lower), lower);
            }
            k
        };
        let mut keyed: Vec<(u64, u64)> = recs.iter().map(|&r| (key(r), r)).collect();
        keyed.sort_unstable();
        for (dst, (_, r)) in recs.iter_mut().zip(keyed) {
            *dst = r;
        }
    } else {
        let mut rows: Vec<Vec<u64>> = recs.chunks(width).map(|c| c.to_vec()).collect();
        rows.sort_unstable_by(|a, b| cmp(a, b));
        for (dst, row) in recs.chunks_mut(width).zip(rows) {
            dst.copy_from_slice(&row);
        }
    }
}

/// All assignments of a state (possible / impossible / both) to each element, as record masks.
/// With `need_both_sides`, at least one element must land in each set.
fn assignments(
    elems: &[usize],
    radix: &[u8],
    poss_off: usize,
    imp_off: usize,
    width: usize,
    need_both_sides: bool,
) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut digits = vec![0u8; elems.len()];
    loop {
        let has_poss = digits.iter().any(|&d| d != 1);
        let has_imp = digits.iter().any(|&d| d != 0);
        if !need_both_sides || (has_poss && has_imp) {
            let mut m = vec![0u64; width];
            for (&y, &d) in elems.iter().zip(&digits) {
                if d != 1 {
                    set_bit(&mut m, poss_off + y);
                }
                if d != 0 {
                    set_bit(&mut m, imp_off + y);
                }
            }
            out.push(m);
        }
        let mut j = 0;
        loop {
            if j == digits.len() {
                return out;
            }
            digits[j] += 1;
            if digits[j] < radix[j] {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// Counts of the built registry at each level: (total, completed, incompleted).
pub fn registry_counts(u: &Universe) -> Vec<(usize, usize, usize)> {
    (0..=u.max_level())
        .map(|k| {
            let c = u.completed_count(k);
            (u.size(k), c, u.size(k) - c)
        })
        .collect()
}
