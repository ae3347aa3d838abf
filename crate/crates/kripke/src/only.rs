use std::collections::HashSet;

use col_biworld::{AgentSets, Biworld, FixedBitSet, Universe};
use col_eval::EvalContext;
use col_syntax::{Formula, TruthValue};

use crate::error::KripkeError;

fn depth_of(phi: &Formula) -> Result<usize, KripkeError> {
    phi.finite_depth().map(|d| d as usize).ok_or(KripkeError::InfiniteDepth)
}

/// A biworld one level above `level` whose agent `a` considers exactly `poss` possible
/// and the rest impossible; the other agents consider everything possible.
fn assemble(u: &Universe, level: usize, a: usize, objective: u64, poss: FixedBitSet) -> Biworld {
    let agents = (0..u.n_agents())
        .map(|b| {
            if b == a {
                let mut imp = poss.clone();
                imp.toggle_range(..);
                AgentSets::new(poss.clone(), imp)
            } else {
                AgentSets::new(u.full_set(level), u.empty_set(level))
            }
        })
        .collect();
    Biworld::from_parts(level + 1, objective, agents)
}

fn truth_ids(u: &Universe, phi: &Formula, level: usize) -> Result<(FixedBitSet, FixedBitSet), KripkeError> {
    let ctx = EvalContext::new(u);
    let mut t = u.empty_set(level);
    let mut f = u.empty_set(level);
    for id in 0..u.size(level) {
        match ctx.eval_id(phi, level, id)? {
            TruthValue::T => t.insert(id),
            TruthValue::F => f.insert(id),
            TruthValue::U => {}
        }
    }
    Ok((t, f))
}

fn agent(u: &Universe, name: &str) -> Result<usize, KripkeError> {
    u.agent_index(name).ok_or_else(|| col_eval::EvalError::UnknownAgent(name.to_string()).into())
}

/// The level-(MD+1) biworld in which agent `a` only knows `phi`: its possible set is the
/// level-MD biworlds where `phi` is true, its impossible set those where it is false.
pub fn only_knows_world(phi: &Formula, a: &str, objective: u64, u: &Universe) -> Result<Biworld, KripkeError> {
    let d = depth_of(phi)?;
    u.require_level(d)?;
    let a = agent(u, a)?;
    let (t, f) = truth_ids(u, phi, d)?;
    let w = assemble(u, d, a, objective, t);
    // resolution: every level-MD biworld gives phi a definite value
    debug_assert_eq!(w.imp(a), &f);
    u.validate(&w)?;
    Ok(w)
}

/// The level-(MD+2) biworld in which agent `a` considers possible exactly the level-(MD+1)
/// biworlds where `phi` and `K[a] phi` both hold.
pub fn pi_only_knows_world(phi: &Formula, a: &str, objective: u64, u: &Universe) -> Result<Biworld, KripkeError> {
    let d = depth_of(phi)?;
    u.require_level(d + 1)?;
    let name = a;
    let a = agent(u, a)?;
    let both = Formula::and(phi.clone(), Formula::k(name, phi.clone()));
    let (t, _) = truth_ids(u, &both, d + 1)?;
    let w = assemble(u, d + 1, a, objective, t);
    u.validate(&w)?;
    Ok(w)
}

/// Positive introspection on biworlds, checked at `w` and at every registered biworld
/// reachable from it through possible sets: for each agent, whatever is possible at a
/// possible biworld is the restriction of something possible.
pub fn biworld_pi_closure(u: &Universe, w: &Biworld) -> Result<bool, KripkeError> {
    u.validate(w)?;
    if w.level() == 0 {
        return Ok(true);
    }
    let top: Vec<Vec<usize>> = w.agents().iter().map(|s| s.poss.ones().collect()).collect();
    if !pi_at(u, w.level(), &top) {
        return Ok(false);
    }
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut stack: Vec<(usize, usize)> = top.iter().flatten().map(|&y| (w.level() - 1, y)).collect();
    while let Some((level, id)) = stack.pop() {
        if level == 0 || !seen.insert((level, id)) {
            continue;
        }
        let sets: Vec<Vec<usize>> = (0..u.n_agents()).map(|a| u.poss_ids(level, id, a)).collect();
        if !pi_at(u, level, &sets) {
            return Ok(false);
        }
        stack.extend(sets.iter().flatten().map(|&y| (level - 1, y)));
    }
    Ok(true)
}

fn pi_at(u: &Universe, level: usize, poss: &[Vec<usize>]) -> bool {
    if level < 2 {
        return true;
    }
    let below = level - 1;
    poss.iter().enumerate().all(|(a, ys)| {
        let restricted: HashSet<usize> = ys.iter().map(|&y| u.parent(below, y)).collect();
        ys.iter().all(|&y| u.poss_ids(below, y, a).iter().all(|x| restricted.contains(x)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use col_biworld::{id_set, DEFAULT_CAP};
    use col_syntax::{parse, Signature};

    fn universe() -> Universe {
        Universe::build(&Signature::new(["p"], ["a"]), 1, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn only_knowing_atoms() {
        let u = universe();
        let p = Formula::atom("p");
        let w = only_knows_world(&p, "a", 1, &u).unwrap();
        assert_eq!(w, Biworld::from_parts(1, 1, vec![AgentSets::new(id_set(2, [1]), id_set(2, [0]))]));
        let top = only_knows_world(&Formula::True, "a", 1, &u).unwrap();
        assert_eq!(top.poss(0).count_ones(..), 2);
        let bottom = only_knows_world(&Formula::False, "a", 1, &u).unwrap();
        assert_eq!(bottom.imp(0).count_ones(..), 2);
        let ctx = EvalContext::new(&u);
        for (phi, w) in [(p.clone(), &w), (Formula::False, &bottom)] {
            assert_eq!(ctx.eval(&Formula::o("a", phi), w).unwrap(), TruthValue::T);
        }
    }

    #[test]
    fn errors() {
        let u = universe();
        let c = parse("C[{a}] p", u.signature()).unwrap();
        assert_eq!(only_knows_world(&c, "a", 1, &u).unwrap_err().kind(), "InfiniteDepth");
        let deep = parse("K[a] K[a] p", u.signature()).unwrap();
        assert_eq!(only_knows_world(&deep, "a", 1, &u).unwrap_err().kind(), "UnbuiltLevel");
        assert_eq!(pi_only_knows_world(&parse("K[a] p", u.signature()).unwrap(), "a", 1, &u).unwrap_err().kind(), "UnbuiltLevel");
    }

    #[test]
    fn pi_construction() {
        let u = universe();
        let w = pi_only_knows_world(&Formula::atom("p"), "a", 1, &u).unwrap();
        assert_eq!(w.level(), 2);
        let poss: Vec<usize> = w.poss(0).ones().collect();
        assert_eq!(poss.len(), 3);
        assert!(poss.iter().all(|&v| u.obj_of(1, v) == 1 && u.poss_ids(1, v, 0).iter().all(|&x| x == 1)));
        assert_eq!(pi_only_knows_world(&Formula::True, "a", 1, &u).unwrap().poss(0).count_ones(..), 18);
        assert_eq!(pi_only_knows_world(&Formula::False, "a", 1, &u).unwrap().poss(0).count_ones(..), 0);
        assert!(biworld_pi_closure(&u, &w).unwrap());
    }

    #[test]
    fn pi_closure_rejects() {
        let u = universe();
        // possible: a level-1 biworld with obj {p} that considers {} possible; {} is not a restriction of it
        let v = u.lookup(&Biworld::from_parts(1, 1, vec![AgentSets::new(id_set(2, [0]), id_set(2, [1]))])).unwrap();
        let mut imp = u.full_set(1);
        imp.set(v, false);
        let w = Biworld::from_parts(2, 1, vec![AgentSets::new(id_set(18, [v]), imp)]);
        assert!(!biworld_pi_closure(&u, &w).unwrap());
    }
}
