use std::fmt;

use crate::ordinal::OrdinalW2;

/// A non-empty, sorted, duplicate-free set of agent names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group(Vec<String>);

impl Group {
    /// Returns `None` for an empty member list.
    pub fn new<I, S>(members: I) -> Option<Group>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = members.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            None
        } else {
            Some(Group(v))
        }
    }

    pub fn single(agent: &str) -> Group {
        Group(vec![agent.to_string()])
    }

    pub fn members(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    K(String, Box<Formula>),
    M(String, Box<Formula>),
    E(Group, Box<Formula>),
    C(Group, Box<Formula>),
    O(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn k(agent: &str, f: Formula) -> Formula {
        Formula::K(agent.to_string(), Box::new(f))
    }

    pub fn m(agent: &str, f: Formula) -> Formula {
        Formula::M(agent.to_string(), Box::new(f))
    }

    pub fn o(agent: &str, f: Formula) -> Formula {
        Formula::O(agent.to_string(), Box::new(f))
    }

    pub fn e(group: Group, f: Formula) -> Formula {
        Formula::E(group, Box::new(f))
    }

    pub fn c(group: Group, f: Formula) -> Formula {
        Formula::C(group, Box::new(f))
    }

    /// `E_G` applied `k` times.
    pub fn e_iter(group: &Group, k: usize, f: Formula) -> Formula {
        (0..k).fold(f, |acc, _| Formula::e(group.clone(), acc))
    }

    pub fn modal_depth(&self) -> OrdinalW2 {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => OrdinalW2::ZERO,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::K(_, f) | Formula::M(_, f) | Formula::E(_, f) | Formula::O(_, f) => {
                f.modal_depth().succ()
            }
            Formula::C(_, f) => f.modal_depth().plus_omega(),
        }
    }

    /// Modal depth as a natural number; `None` when a `C` occurs.
    pub fn finite_depth(&self) -> Option<u32> {
        self.modal_depth().as_finite()
    }

    pub fn is_c_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => true,
            Formula::Not(f) | Formula::K(_, f) | Formula::M(_, f) | Formula::E(_, f) | Formula::O(_, f) => {
                f.is_c_free()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_c_free() && b.is_c_free(),
            Formula::C(_, _) => false,
        }
    }

    /// Number of `C` operators on the deepest nesting path.
    pub fn c_nesting(&self) -> u32 {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => 0,
            Formula::Not(f) | Formula::K(_, f) | Formula::M(_, f) | Formula::E(_, f) | Formula::O(_, f) => {
                f.c_nesting()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.c_nesting().max(b.c_nesting()),
            Formula::C(_, f) => f.c_nesting() + 1,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => 1,
            Formula::Not(f) | Formula::K(_, f) | Formula::M(_, f) | Formula::E(_, f) | Formula::O(_, f) | Formula::C(_, f) => {
                1 + f.size()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Rewrites `True`, `False`, `Or`, `Implies` and `O` into `Not`/`And`/`K`/`M`.
    pub fn expand(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            // kept primitive: the vocabulary may be empty, so there is no p for ~(p & ~p)
            Formula::True => Formula::True,
            Formula::False => Formula::not(Formula::True),
            Formula::Not(f) => Formula::not(f.expand()),
            Formula::And(a, b) => Formula::and(a.expand(), b.expand()),
            Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(a.expand()), Formula::not(b.expand()))),
            Formula::Implies(a, b) => Formula::not(Formula::and(a.expand(), Formula::not(b.expand()))),
            Formula::K(a, f) => Formula::k(a, f.expand()),
            Formula::M(a, f) => Formula::m(a, f.expand()),
            Formula::E(g, f) => Formula::e(g.clone(), f.expand()),
            Formula::C(g, f) => Formula::c(g.clone(), f.expand()),
            Formula::O(a, f) => {
                let inner = f.expand();
                Formula::and(Formula::k(a, inner.clone()), Formula::m(a, inner))
            }
        }
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut out, &mut Vec::new());
        out.sort();
        out.dedup();
        out
    }

    pub fn agents(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_names(&self, atoms: &mut Vec<String>, agents: &mut Vec<String>) {
        match self {
            Formula::Atom(p) => atoms.push(p.clone()),
            Formula::True | Formula::False => {}
            Formula::Not(f) => f.collect_names(atoms, agents),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(atoms, agents);
                b.collect_names(atoms, agents);
            }
            Formula::K(a, f) | Formula::M(a, f) | Formula::O(a, f) => {
                agents.push(a.clone());
                f.collect_names(atoms, agents);
            }
            Formula::E(g, f) | Formula::C(g, f) => {
                agents.extend(g.members().iter().cloned());
                f.collect_names(atoms, agents);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::K(a, x) => write!(f, "K[{a}] {x}"),
            Formula::M(a, x) => write!(f, "M[{a}] {x}"),
            Formula::O(a, x) => write!(f, "O[{a}] {x}"),
            Formula::E(g, x) => write!(f, "E[{g}] {x}"),
            Formula::C(g, x) => write!(f, "C[{g}] {x}"),
        }
    }
}

/// Canonical text form of a formula.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn depth_rules() {
        assert_eq!(p().modal_depth(), OrdinalW2::ZERO);
        let c = Formula::c(Group::single("a"), p());
        assert_eq!(c.modal_depth(), OrdinalW2::new(1, 0));
        assert_eq!(Formula::k("a", c.clone()).modal_depth(), OrdinalW2::new(1, 1));
        let kk = Formula::k("a", Formula::k("a", p()));
        assert_eq!(Formula::and(kk, c).modal_depth(), OrdinalW2::new(1, 0));
        assert_eq!(Formula::o("a", p()).modal_depth(), OrdinalW2::finite(1));
    }

    #[test]
    fn render_forms() {
        assert_eq!(render(&Formula::k("a", p())), "K[a] p");
        assert_eq!(render(&Formula::and(p(), Formula::not(Formula::atom("q")))), "(p & ~q)");
        let g = Group::new(["b", "a"]).unwrap();
        assert_eq!(render(&Formula::c(g, p())), "C[{a,b}] p");
    }

    #[test]
    fn group_rules() {
        assert!(Group::new(Vec::<String>::new()).is_none());
        assert_eq!(Group::new(["b", "a", "b"]).unwrap().members(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn expansion_is_core_only() {
        let f = Formula::o("a", Formula::implies(p(), Formula::or(Formula::False, p())));
        fn core(f: &Formula) -> bool {
            match f {
                Formula::Atom(_) | Formula::True => true,
                Formula::Not(x) | Formula::K(_, x) | Formula::M(_, x) | Formula::E(_, x) | Formula::C(_, x) => core(x),
                Formula::And(a, b) => core(a) && core(b),
                _ => false,
            }
        }
        assert!(core(&f.expand()));
        assert_eq!(f.expand().modal_depth(), f.modal_depth());
    }
}
