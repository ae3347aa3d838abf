use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use col_biworld::{Biworld, Universe};
use col_syntax::{Formula, TruthValue};

use crate::error::EvalError;

type NodeId = u32;

/// Hash-consed formula node; children are node ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Atom(usize),
    True,
    False,
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    K(usize, NodeId),
    M(usize, NodeId),
    O(usize, NodeId),
    E(Vec<usize>, NodeId),
    /// `chain[j]` is the node of E^(j+1) over the same group.
    C(Vec<usize>, NodeId, Vec<NodeId>),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
}

impl Interner {
    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }
}

/// How many iterates of E the common-knowledge clause inspects at a level-L biworld.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// k = 1..L+1
    Standard,
    /// k = 1..2(L+1)
    Extended,
}

impl Probe {
    fn bound(self, level: usize) -> usize {
        match self {
            Probe::Standard => level + 1,
            Probe::Extended => 2 * (level + 1),
        }
    }
}

#[derive(Clone, Copy)]
enum Target<'w> {
    Id(usize, usize),
    World(&'w Biworld),
}

/// Valuation context over one universe. Formulas are interned on first use and
/// values of modal subformulas at registered biworlds are cached; the cache is
/// write-once and safe to share between threads.
pub struct EvalContext<'u> {
    u: &'u Universe,
    probe: Probe,
    interner: RwLock<Interner>,
    memo: Mutex<HashMap<(NodeId, u32, u32), TruthValue>>,
}

impl<'u> EvalContext<'u> {
    pub fn new(u: &'u Universe) -> Self {
        Self::with_probe(u, Probe::Standard)
    }

    pub fn with_probe(u: &'u Universe, probe: Probe) -> Self {
        EvalContext { u, probe, interner: RwLock::default(), memo: Mutex::default() }
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    pub fn probe(&self) -> Probe {
        self.probe
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// Value of `phi` at `w`; `w` may be registered or one level above the registry.
    pub fn eval(&self, phi: &Formula, w: &Biworld) -> Result<TruthValue, EvalError> {
        self.u.validate(w)?;
        let root = self.prepare(phi)?;
        let target = if w.level() <= self.u.max_level() {
            let id = self.u.lookup(w).expect("validated biworld is registered");
            Target::Id(w.level(), id)
        } else {
            Target::World(w)
        };
        let interner = self.interner.read().unwrap();
        Ok(self.val(&interner.nodes, root, target))
    }

    /// Value of `phi` at the registered biworld `id` of `level`.
    pub fn eval_id(&self, phi: &Formula, level: usize, id: usize) -> Result<TruthValue, EvalError> {
        self.u.require_level(level)?;
        if id >= self.u.size(level) {
            return Err(EvalError::Foreign(col_biworld::BiworldError::Foreign(format!(
                "no level-{level} biworld #{id}"
            ))));
        }
        let root = self.prepare(phi)?;
        let interner = self.interner.read().unwrap();
        Ok(self.val(&interner.nodes, root, Target::Id(level, id)))
    }

    fn prepare(&self, phi: &Formula) -> Result<NodeId, EvalError> {
        let mut interner = self.interner.write().unwrap();
        self.intern(&mut interner, phi)
    }

    fn agent(&self, name: &str) -> Result<usize, EvalError> {
        self.u.agent_index(name).ok_or_else(|| EvalError::UnknownAgent(name.to_string()))
    }

    fn group(&self, names: &[String]) -> Result<Vec<usize>, EvalError> {
        names.iter().map(|a| self.agent(a)).collect()
    }

    fn intern(&self, t: &mut Interner, phi: &Formula) -> Result<NodeId, EvalError> {
        let node = match phi {
            Formula::Atom(a) => Node::Atom(self.u.atom_index(a).ok_or_else(|| EvalError::UnknownAtom(a.clone()))?),
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Not(x) => Node::Not(self.intern(t, x)?),
            Formula::And(a, b) => Node::And(self.intern(t, a)?, self.intern(t, b)?),
            Formula::Or(a, b) => Node::Or(self.intern(t, a)?, self.intern(t, b)?),
            Formula::Implies(a, b) => Node::Implies(self.intern(t, a)?, self.intern(t, b)?),
            Formula::K(a, x) => Node::K(self.agent(a)?, self.intern(t, x)?),
            Formula::M(a, x) => Node::M(self.agent(a)?, self.intern(t, x)?),
            Formula::O(a, x) => Node::O(self.agent(a)?, self.intern(t, x)?),
            Formula::E(g, x) => Node::E(self.group(g.members())?, self.intern(t, x)?),
            Formula::C(g, x) => {
                let agents = self.group(g.members())?;
                let inner = self.intern(t, x)?;
                // the deepest world is one level above the registry
                let len = Probe::Extended.bound(self.u.max_level() + 1);
                let mut chain = Vec::with_capacity(len);
                let mut cur = inner;
                for _ in 0..len {
                    cur = t.intern(Node::E(agents.clone(), cur));
                    chain.push(cur);
                }
                Node::C(agents, inner, chain)
            }
        };
        Ok(t.intern(node))
    }

    fn val(&self, nodes: &[Node], n: NodeId, t: Target) -> TruthValue {
        use TruthValue::*;
        match &nodes[n as usize] {
            Node::Atom(i) => TruthValue::from_bool((self.obj(t) >> i) & 1 == 1),
            Node::True => T,
            Node::False => F,
            Node::Not(x) => self.val(nodes, *x, t).inverse(),
            Node::And(a, b) => match self.val(nodes, *a, t) {
                F => F,
                va => va.meet(self.val(nodes, *b, t)),
            },
            Node::Or(a, b) => match self.val(nodes, *a, t) {
                T => T,
                va => va.join(self.val(nodes, *b, t)),
            },
            Node::Implies(a, b) => match self.val(nodes, *a, t).inverse() {
                T => T,
                va => va.join(self.val(nodes, *b, t)),
            },
            modal => {
                if let Target::Id(level, id) = t {
                    let key = (n, level as u32, id as u32);
                    if let Some(&v) = self.memo.lock().unwrap().get(&key) {
                        return v;
                    }
                    let v = self.modal(nodes, modal, t);
                    let prev = *self.memo.lock().unwrap().entry(key).or_insert(v);
                    debug_assert_eq!(prev, v);
                    v
                } else {
                    self.modal(nodes, modal, t)
                }
            }
        }
    }

    fn modal(&self, nodes: &[Node], node: &Node, t: Target) -> TruthValue {
        use TruthValue::*;
        let level = self.level(t);
        match node {
            Node::K(a, x) => self.know(nodes, *a, *x, t),
            Node::M(a, x) => self.at_most(nodes, *a, *x, t),
            Node::O(a, x) => match self.know(nodes, *a, *x, t) {
                F => F,
                k => k.meet(self.at_most(nodes, *a, *x, t)),
            },
            Node::E(g, x) => {
                let mut acc = T;
                for &a in g {
                    acc = acc.meet(self.know(nodes, a, *x, t));
                    if acc == F {
                        break;
                    }
                }
                acc
            }
            Node::C(_, _, chain) => {
                let mut seen_u = false;
                for &e in &chain[..self.probe.bound(level)] {
                    match self.val(nodes, e, t) {
                        F => return F,
                        U => seen_u = true,
                        T => {}
                    }
                }
                if seen_u {
                    U
                } else {
                    T
                }
            }
            _ => unreachable!("non-modal node"),
        }
    }

    /// glb of the values of `x` over the possible set of agent `a`; u at level 0.
    fn know(&self, nodes: &[Node], a: usize, x: NodeId, t: Target) -> TruthValue {
        self.glb_over(nodes, a, x, t, true)
    }

    /// glb of the inverted values of `x` over the impossible set of agent `a`; u at level 0.
    fn at_most(&self, nodes: &[Node], a: usize, x: NodeId, t: Target) -> TruthValue {
        self.glb_over(nodes, a, x, t, false)
    }

    fn glb_over(&self, nodes: &[Node], a: usize, x: NodeId, t: Target, poss: bool) -> TruthValue {
        let level = self.level(t);
        if level == 0 {
            return TruthValue::U;
        }
        let ids: Vec<usize> = match t {
            Target::Id(l, id) if poss => self.u.poss_ids(l, id, a),
            Target::Id(l, id) => self.u.imp_ids(l, id, a),
            Target::World(w) if poss => w.poss(a).ones().collect(),
            Target::World(w) => w.imp(a).ones().collect(),
        };
        let mut acc = TruthValue::T;
        for y in ids {
            let v = self.val(nodes, x, Target::Id(level - 1, y));
            acc = acc.meet(if poss { v } else { v.inverse() });
            if acc == TruthValue::F {
                break;
            }
        }
        acc
    }

    fn obj(&self, t: Target) -> u64 {
        match t {
            Target::Id(level, id) => self.u.obj_of(level, id),
            Target::World(w) => w.obj(),
        }
    }

    fn level(&self, t: Target) -> usize {
        match t {
            Target::Id(level, _) => level,
            Target::World(w) => w.level(),
        }
    }
}
