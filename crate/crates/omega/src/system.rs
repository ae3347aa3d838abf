use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use col_biworld::{restrict, AgentSets, Biworld, FixedBitSet, Universe};
use col_eval::EvalContext;
use col_syntax::{lub_p, Formula, Group, TruthValue};

use crate::error::OmegaError;
use crate::family::{AgentRules, SetExpr, SymbolicFamily};

pub const DEFAULT_K_MAX: usize = 3;

/// Families over one universe; prefixes are materialized on demand and cached.
pub struct SymbolicSystem<'u> {
    u: &'u Universe,
    families: Vec<SymbolicFamily>,
    index: HashMap<String, usize>,
    cache: Mutex<HashMap<(usize, usize), Biworld>>,
}

impl std::fmt::Debug for SymbolicSystem<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolicSystem").field("families", &self.families).finish()
    }
}

/// Result of evaluating over a family's prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaValue {
    pub value: TruthValue,
    /// Value at each materialized level, from 0.
    pub levels: Vec<TruthValue>,
}

impl<'u> SymbolicSystem<'u> {
    pub fn new(u: &'u Universe, families: Vec<SymbolicFamily>) -> Result<Self, OmegaError> {
        let mut index = HashMap::new();
        for (i, f) in families.iter().enumerate() {
            if index.insert(f.name.clone(), i).is_some() {
                return Err(OmegaError::DuplicateFamily(f.name.clone()));
            }
        }
        for f in &families {
            let invalid = |msg: String| OmegaError::InvalidFamily { family: f.name.clone(), msg };
            for a in &f.objective {
                if u.atom_index(a).is_none() {
                    return Err(invalid(format!("undeclared atom '{a}'")));
                }
            }
            for (a, _) in &f.rules {
                if u.agent_index(a).is_none() {
                    return Err(invalid(format!("undeclared agent '{a}'")));
                }
            }
            for a in u.agents() {
                let r = f.rules_for(a).ok_or_else(|| invalid(format!("no rule for agent '{a}'")))?;
                for g in r.poss.references().into_iter().chain(r.imp.references()) {
                    if !index.contains_key(g) {
                        return Err(OmegaError::UnknownFamily(g.to_string()));
                    }
                }
            }
        }
        Ok(SymbolicSystem { u, families, index, cache: Mutex::default() })
    }

    /// The families `v` (objective `{p}`) and `u` (objective empty), both with possible
    /// set `{(v)_α}` and impossible set everything, for every agent.
    pub fn default_families(u: &Universe) -> Vec<SymbolicFamily> {
        let rules = |_: ()| -> Vec<(String, AgentRules)> {
            u.agents().iter().map(|a| (a.clone(), AgentRules { poss: SetExpr::prev("v"), imp: SetExpr::All })).collect()
        };
        vec![
            SymbolicFamily { name: "v".into(), objective: vec!["p".into()], rules: rules(()) },
            SymbolicFamily { name: "u".into(), objective: Vec::new(), rules: rules(()) },
        ]
    }

    pub fn default_system(u: &'u Universe) -> Result<Self, OmegaError> {
        SymbolicSystem::new(u, SymbolicSystem::default_families(u))
    }

    /// The system without `name`; fails if another family refers to it.
    pub fn without(&self, name: &str) -> Result<SymbolicSystem<'u>, OmegaError> {
        let fams = self.families.iter().filter(|f| f.name != name).cloned().collect();
        SymbolicSystem::new(self.u, fams)
    }

    pub fn with_family(&self, family: SymbolicFamily) -> Result<SymbolicSystem<'u>, OmegaError> {
        let mut fams: Vec<SymbolicFamily> = self.families.iter().filter(|f| f.name != family.name).cloned().collect();
        fams.push(family);
        SymbolicSystem::new(self.u, fams)
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    pub fn families(&self) -> &[SymbolicFamily] {
        &self.families
    }

    pub fn has(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn family(&self, name: &str) -> Result<&SymbolicFamily, OmegaError> {
        self.index.get(name).map(|&i| &self.families[i]).ok_or_else(|| OmegaError::UnknownFamily(name.to_string()))
    }

    /// Highest level that can be materialized: one above the registry.
    pub fn top_level(&self) -> usize {
        self.u.max_level() + 1
    }

    /// The level-k member `(family)_k`.
    pub fn materialize(&self, name: &str, k: usize) -> Result<Biworld, OmegaError> {
        let fi = *self.index.get(name).ok_or_else(|| OmegaError::UnknownFamily(name.to_string()))?;
        if let Some(w) = self.cache.lock().unwrap().get(&(fi, k)) {
            return Ok(w.clone());
        }
        let f = &self.families[fi];
        let obj = f.objective.iter().fold(0u64, |acc, a| acc | 1 << self.u.atom_index(a).unwrap());
        let w = if k == 0 {
            Biworld::interpretation(obj)
        } else {
            let alpha = k - 1;
            self.u.require_level(alpha)?;
            let agents = self
                .u
                .agents()
                .iter()
                .map(|a| {
                    let r = f.rules_for(a).unwrap();
                    Ok(AgentSets::new(self.denote(&r.poss, alpha)?, self.denote(&r.imp, alpha)?))
                })
                .collect::<Result<Vec<_>, OmegaError>>()?;
            let w = Biworld::from_parts(k, obj, agents);
            self.u.validate(&w).map_err(|e| OmegaError::InvalidFamily { family: name.to_string(), msg: e.to_string() })?;
            w
        };
        self.cache.lock().unwrap().entry((fi, k)).or_insert_with(|| w.clone());
        Ok(w)
    }

    fn denote(&self, e: &SetExpr, alpha: usize) -> Result<FixedBitSet, OmegaError> {
        Ok(match e {
            SetExpr::PrevOf(g) => {
                let w = self.materialize(g, alpha)?;
                let id = self.u.lookup(&w).expect("materialized prefix below the top is registered");
                let mut s = self.u.empty_set(alpha);
                s.insert(id);
                s
            }
            SetExpr::All => self.u.full_set(alpha),
            SetExpr::Empty => self.u.empty_set(alpha),
            SetExpr::Union(a, b) => {
                let mut s = self.denote(a, alpha)?;
                s.union_with(&self.denote(b, alpha)?);
                s
            }
            SetExpr::Diff(a, b) => {
                let mut s = self.denote(a, alpha)?;
                s.difference_with(&self.denote(b, alpha)?);
                s
            }
        })
    }

    /// lub in the precision order of the values of `phi` at the prefixes up to
    /// `min(k_max, top_level())`, checking along the way that the prefixes form a chain.
    pub fn eval_omega(&self, phi: &Formula, name: &str, k_max: usize) -> Result<OmegaValue, OmegaError> {
        let ctx = EvalContext::new(self.u);
        let mut levels = Vec::new();
        let mut prev: Option<Biworld> = None;
        for k in 0..=k_max.min(self.top_level()) {
            let w = self.materialize(name, k)?;
            if let Some(p) = &prev {
                if restrict(self.u, &w, k - 1)? != *p {
                    return Err(OmegaError::NotAChain { family: name.to_string(), level: k });
                }
            }
            levels.push(ctx.eval(phi, &w)?);
            prev = Some(w);
        }
        let value = lub_p(levels.iter().copied())
            .map_err(|_| OmegaError::NotAChain { family: name.to_string(), level: levels.len() })?;
        Ok(OmegaValue { value, levels })
    }

    /// Families reachable from `name` in one or more steps through the possible-set rules of
    /// the agents in `group`. Each rule on the way must be built from prev and empty only.
    pub fn cg_closure(&self, group: &Group, name: &str) -> Result<BTreeSet<String>, OmegaError> {
        for a in group.members() {
            if self.u.agent_index(a).is_none() {
                return Err(col_eval::EvalError::UnknownAgent(a.clone()).into());
            }
        }
        self.family(name)?;
        let mut seen = BTreeSet::new();
        let mut stack = vec![name.to_string()];
        let mut expanded = BTreeSet::new();
        while let Some(g) = stack.pop() {
            if !expanded.insert(g.clone()) {
                continue;
            }
            let f = self.family(&g)?;
            for a in group.members() {
                let r = f.rules_for(a).unwrap();
                if !r.poss.is_finite_prev() {
                    return Err(OmegaError::UnsupportedRule { family: g.clone(), agent: a.clone() });
                }
                for h in r.poss.references() {
                    seen.insert(h.to_string());
                    stack.push(h.to_string());
                }
            }
        }
        Ok(seen)
    }

    /// Common knowledge of `phi` among `group` at a family whose accessibility stays inside a
    /// finite set of families: by the fixed point property it is the conjunction of `phi`
    /// over that set.
    pub fn eval_cg_closure(&self, phi: &Formula, group: &Group, name: &str) -> Result<TruthValue, OmegaError> {
        let closure = self.cg_closure(group, name)?;
        let mut values = Vec::new();
        for g in &closure {
            values.push(self.eval_omega(phi, g, DEFAULT_K_MAX)?.value);
        }
        Ok(col_syntax::glb_t(values))
    }
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
    fn materialized_prefixes() {
        let u = universe();
        let s = SymbolicSystem::default_system(&u).unwrap();
        assert_eq!(s.materialize("v", 0).unwrap(), Biworld::interpretation(1));
        let v1 = Biworld::from_parts(1, 1, vec![AgentSets::new(id_set(2, [1]), id_set(2, [0, 1]))]);
        assert_eq!(s.materialize("v", 1).unwrap(), v1);
        assert_eq!(s.materialize("u", 1).unwrap(), v1.with_obj(0));
        let v2 = s.materialize("v", 2).unwrap();
        assert_eq!(v2.poss(0).ones().collect::<Vec<_>>(), vec![u.lookup(&v1).unwrap()]);
        assert_eq!(v2.imp(0).count_ones(..), 18);
        assert_eq!(s.materialize("v", 3).unwrap_err().kind(), "UnbuiltLevel");
        assert_eq!(s.materialize("w", 0).unwrap_err().kind(), "UnknownFamily");
    }

    #[test]
    fn omega_values() {
        use TruthValue::*;
        let u = universe();
        let s = SymbolicSystem::default_system(&u).unwrap();
        let f = |t: &str| parse(t, u.signature()).unwrap();
        assert_eq!(s.eval_omega(&f("K[a] p"), "v", 2).unwrap().value, T);
        assert_eq!(s.eval_omega(&f("p"), "u", 1).unwrap().value, F);
        let cp = s.eval_omega(&f("C[{a}] p"), "v", 3).unwrap();
        assert_eq!(cp.value, U);
        assert_eq!(cp.levels.len(), 3);
        assert_eq!(s.eval_omega(&f("K[a] K[a] p"), "v", 0).unwrap().value, U);
    }

    #[test]
    fn closure_values() {
        use TruthValue::*;
        let u = Universe::build(&Signature::new(["p", "q"], ["a"]), 1, DEFAULT_CAP).unwrap();
        let s = SymbolicSystem::default_system(&u).unwrap();
        let g = Group::single("a");
        let f = |t: &str| parse(t, u.signature()).unwrap();
        assert_eq!(s.eval_cg_closure(&f("p"), &g, "v").unwrap(), T);
        assert_eq!(s.eval_cg_closure(&f("p"), &g, "u").unwrap(), T);
        assert_eq!(s.eval_cg_closure(&f("q"), &g, "v").unwrap(), F);
        let wide = SymbolicFamily {
            name: "x".into(),
            objective: vec![],
            rules: vec![("a".into(), AgentRules { poss: SetExpr::All, imp: SetExpr::All })],
        };
        let s2 = s.with_family(wide).unwrap();
        assert_eq!(s2.eval_cg_closure(&f("p"), &g, "x").unwrap_err().kind(), "UnsupportedRule");
    }

    #[test]
    fn system_validation() {
        let u = universe();
        let s = SymbolicSystem::default_system(&u).unwrap();
        assert_eq!(s.without("v").unwrap_err().kind(), "UnknownFamily");
        assert!(s.without("u").is_ok());
        let mut fams = SymbolicSystem::default_families(&u);
        fams.push(fams[0].clone());
        assert_eq!(SymbolicSystem::new(&u, fams).unwrap_err().kind(), "DuplicateFamily");
        let bad = SymbolicFamily {
            name: "b".into(),
            objective: vec![],
            rules: vec![("a".into(), AgentRules { poss: SetExpr::Empty, imp: SetExpr::Empty })],
        };
        let s2 = s.with_family(bad).unwrap();
        assert_eq!(s2.materialize("b", 1).unwrap_err().kind(), "InvalidFamily");
    }
}
