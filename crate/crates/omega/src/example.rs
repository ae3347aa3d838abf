use col_biworld::{json::obj_names, Biworld};
use col_syntax::{Formula, Group, TruthValue};
use serde_json::{json, Value};

use crate::error::OmegaError;
use crate::survivors::cg_survivors_lifted;
use crate::system::SymbolicSystem;

/// Finite-level evidence at one level: how many biworlds leave `C p` open, and whether the
/// `v` and `u` prefixes are among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelEvidence {
    pub level: usize,
    pub survivors: usize,
    pub v_member: bool,
    pub u_member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// True, assuming `v` and `u` are the only omega-biworlds where `p` is common knowledge.
    ConditionalTrue { assumption: String },
    Unsupported { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example3 {
    pub agent: String,
    pub objective: u64,
    /// Symbolic top world, e.g. `({p}, All \ {v', u'}, {v', u'})`.
    pub world: String,
    pub verdict: Verdict,
    pub evidence: Vec<LevelEvidence>,
}

impl Example3 {
    pub fn to_json(&self, sys: &SymbolicSystem) -> Value {
        let verdict = match &self.verdict {
            Verdict::ConditionalTrue { assumption } => json!({ "value": "t", "conditional": true, "assumption": assumption }),
            Verdict::Unsupported { reason } => json!({ "value": "unsupported", "reason": reason }),
        };
        let evidence: Vec<Value> = self
            .evidence
            .iter()
            .map(|e| json!({ "level": e.level, "survivors": e.survivors, "v_prefix": e.v_member, "u_prefix": e.u_member }))
            .collect();
        json!({
            "formula": format!("O[{}] ~C[{{{}}}] p", self.agent, self.agent),
            "world": self.world,
            "objective": obj_names(sys.universe(), self.objective),
            "verdict": verdict,
            "evidence": evidence,
        })
    }
}

/// The world where the first agent only knows that `p` is not common knowledge: it deems
/// impossible exactly the extensions of `v` and `u`.
pub fn example3_world(sys: &SymbolicSystem, objective: u64) -> Result<Example3, OmegaError> {
    let u = sys.universe();
    let agent = u.agents()[0].clone();
    let names = obj_names(u, objective);
    let world = format!("({{{}}}, All \\ {{v', u'}}, {{v', u'}})", names.join(","));
    let unsupported = |reason: String| Example3 {
        agent: agent.clone(),
        objective,
        world: world.clone(),
        verdict: Verdict::Unsupported { reason },
        evidence: Vec::new(),
    };
    if u.atom_index("p").is_none() {
        return Ok(unsupported("the vocabulary has no atom p".into()));
    }
    for name in ["v", "u"] {
        if !sys.has(name) {
            return Ok(unsupported(format!("family {name} is missing, so the set of C p worlds is incomplete")));
        }
    }
    let g = Group::single(&agent);
    let p = Formula::atom("p");
    for name in ["v", "u"] {
        match sys.eval_cg_closure(&p, &g, name) {
            Ok(TruthValue::T) => {}
            Ok(other) => return Ok(unsupported(format!("C p at {name} evaluates to {other}, not t"))),
            Err(e) => return Ok(unsupported(format!("C p at {name}: {e}"))),
        }
    }
    let mut evidence = Vec::new();
    for k in 1..=2.min(sys.top_level()) {
        let surv: Vec<Biworld> = cg_survivors_lifted(&p, &g, k, u)?;
        let v = sys.materialize("v", k)?;
        let w = sys.materialize("u", k)?;
        evidence.push(LevelEvidence {
            level: k,
            survivors: surv.len(),
            v_member: surv.contains(&v),
            u_member: surv.contains(&w),
        });
    }
    Ok(Example3 {
        agent,
        objective,
        world,
        verdict: Verdict::ConditionalTrue {
            assumption: "v and u are the only omega-biworlds at which C p holds".into(),
        },
        evidence,
    })
}
