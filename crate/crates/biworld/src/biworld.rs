use fixedbitset::FixedBitSet;

/// The possible and impossible sets of one agent, as ids into the level below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AgentSets {
    pub poss: FixedBitSet,
    pub imp: FixedBitSet,
}

impl AgentSets {
    pub fn new(poss: FixedBitSet, imp: FixedBitSet) -> Self {
        AgentSets { poss, imp }
    }

    pub fn both(&self) -> FixedBitSet {
        let mut s = self.poss.clone();
        s.intersect_with(&self.imp);
        s
    }

    pub fn is_disjoint(&self) -> bool {
        self.poss.is_disjoint(&self.imp)
    }
}

/// A finite-level biworld. Level 0 is an interpretation, given as a bitmask over the atoms;
/// a level `k+1` biworld adds, per agent, sets of level-`k` ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Biworld {
    level: usize,
    obj: u64,
    agents: Vec<AgentSets>,
}

impl Biworld {
    pub fn interpretation(obj: u64) -> Biworld {
        Biworld { level: 0, obj, agents: Vec::new() }
    }

    /// Builds a biworld without checking the structural conditions;
    /// see `Universe::validate`.
    pub fn from_parts(level: usize, obj: u64, agents: Vec<AgentSets>) -> Biworld {
        assert!(level >= 1, "use Biworld::interpretation for level 0");
        Biworld { level, obj, agents }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn obj(&self) -> u64 {
        self.obj
    }

    pub fn agents(&self) -> &[AgentSets] {
        &self.agents
    }

    pub fn agent(&self, a: usize) -> &AgentSets {
        &self.agents[a]
    }

    pub fn poss(&self, a: usize) -> &FixedBitSet {
        &self.agents[a].poss
    }

    pub fn imp(&self, a: usize) -> &FixedBitSet {
        &self.agents[a].imp
    }

    pub fn with_obj(&self, obj: u64) -> Biworld {
        Biworld { level: self.level, obj, agents: self.agents.clone() }
    }

    /// Completed iff every per-agent intersection is empty; level 0 is never completed.
    pub fn is_completed(&self) -> bool {
        self.level > 0 && self.agents.iter().all(AgentSets::is_disjoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| s.insert(x));
        s
    }

    #[test]
    fn completedness() {
        assert!(!Biworld::interpretation(1).is_completed());
        let v1 = Biworld::from_parts(1, 1, vec![AgentSets::new(set(2, &[1]), set(2, &[0, 1]))]);
        assert!(!v1.is_completed());
        let u = Biworld::from_parts(1, 1, vec![AgentSets::new(set(2, &[1]), set(2, &[0]))]);
        assert!(u.is_completed());
    }
}
