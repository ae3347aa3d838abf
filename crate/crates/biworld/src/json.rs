//! Canonical JSON form of biworlds.
//!
//! Level 0: `{"obj": ["p"]}`; level k+1:
//! `{"obj": [...], "agents": {"a": {"poss": [<level-k>...], "imp": [<level-k>...]}}}`.

use fixedbitset::FixedBitSet;
use serde_json::{json, Map, Value};

use crate::biworld::{AgentSets, Biworld};
use crate::error::BiworldError;
use crate::universe::Universe;

pub fn obj_names(u: &Universe, obj: u64) -> Vec<String> {
    u.atoms().iter().enumerate().filter(|(i, _)| (obj >> i) & 1 == 1).map(|(_, a)| a.clone()).collect()
}

fn registered_json(u: &Universe, level: usize, id: usize) -> Value {
    to_json(u, &u.get(level, id))
}

pub fn to_json(u: &Universe, w: &Biworld) -> Value {
    let obj = obj_names(u, w.obj());
    if w.level() == 0 {
        return json!({ "obj": obj });
    }
    let below = w.level() - 1;
    let mut agents = Map::new();
    for (a, s) in w.agents().iter().enumerate() {
        let poss: Vec<Value> = s.poss.ones().map(|id| registered_json(u, below, id)).collect();
        let imp: Vec<Value> = s.imp.ones().map(|id| registered_json(u, below, id)).collect();
        agents.insert(u.agents()[a].clone(), json!({ "poss": poss, "imp": imp }));
    }
    json!({ "obj": obj, "agents": Value::Object(agents) })
}

fn err(msg: impl Into<String>) -> BiworldError {
    BiworldError::Json(msg.into())
}

fn parse_obj(u: &Universe, v: &Value) -> Result<u64, BiworldError> {
    let arr = v.get("obj").and_then(Value::as_array).ok_or_else(|| err("missing \"obj\" array"))?;
    let mut obj = 0u64;
    for a in arr {
        let name = a.as_str().ok_or_else(|| err("atom names must be strings"))?;
        let i = u.atom_index(name).ok_or_else(|| err(format!("undeclared atom '{name}'")))?;
        obj |= 1 << i;
    }
    Ok(obj)
}

/// Parses without level information; children determine the level.
fn parse_any(u: &Universe, v: &Value) -> Result<Biworld, BiworldError> {
    let obj = parse_obj(u, v)?;
    let Some(agents_v) = v.get("agents") else {
        return Ok(Biworld::interpretation(obj));
    };
    let agents_map = agents_v.as_object().ok_or_else(|| err("\"agents\" must be an object"))?;
    for name in agents_map.keys() {
        if u.agent_index(name).is_none() {
            return Err(err(format!("undeclared agent '{name}'")));
        }
    }
    let mut child_level: Option<usize> = None;
    let mut parsed: Vec<(Vec<Biworld>, Vec<Biworld>)> = Vec::new();
    for name in u.agents() {
        let entry = agents_map.get(name).ok_or_else(|| err(format!("missing agent '{name}'")))?;
        let mut sides = Vec::new();
        for key in ["poss", "imp"] {
            let list = entry.get(key).and_then(Value::as_array).ok_or_else(|| err(format!("agent '{name}' lacks \"{key}\"")))?;
            let mut items = Vec::new();
            for c in list {
                let b = parse_any(u, c)?;
                match child_level {
                    None => child_level = Some(b.level()),
                    Some(l) if l != b.level() => return Err(err("mixed levels inside one biworld")),
                    _ => {}
                }
                items.push(b);
            }
            sides.push(items);
        }
        let imp = sides.pop().unwrap();
        let poss = sides.pop().unwrap();
        parsed.push((poss, imp));
    }
    let below = child_level.ok_or_else(|| err("all sets are empty; the level cannot be inferred"))?;
    u.require_level(below)?;
    let n = u.size(below);
    let mut agents = Vec::new();
    for (poss, imp) in parsed {
        let mut sets = [FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n)];
        for (set, items) in sets.iter_mut().zip([poss, imp]) {
            for b in items {
                let id = u.lookup(&b).ok_or_else(|| err(format!("unknown level-{below} biworld in a set")))?;
                set.insert(id);
            }
        }
        let [p, i] = sets;
        agents.push(AgentSets::new(p, i));
    }
    let w = Biworld::from_parts(below + 1, obj, agents);
    u.validate(&w)?;
    Ok(w)
}

/// Parses and validates a biworld; reports which structural condition fails.
pub fn from_json(u: &Universe, v: &Value) -> Result<Biworld, BiworldError> {
    parse_any(u, v)
}

pub fn from_str(u: &Universe, text: &str) -> Result<Biworld, BiworldError> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    from_json(u, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use col_syntax::Signature;

    fn universe() -> Universe {
        Universe::build(&Signature::new(["p"], ["a"]), 1, crate::DEFAULT_CAP).unwrap()
    }

    #[test]
    fn round_trip_every_registered_biworld() {
        let u = universe();
        for k in 0..=1 {
            for id in 0..u.size(k) {
                let w = u.get(k, id);
                assert_eq!(from_json(&u, &to_json(&u, &w)).unwrap(), w);
            }
        }
    }

    #[test]
    fn level_two_round_trip() {
        use rand::SeedableRng;
        let u = universe();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let w = u.random_biworld(2, &mut rng).unwrap();
            let text = to_json(&u, &w).to_string();
            assert_eq!(from_str(&u, &text).unwrap(), w);
        }
    }

    #[test]
    fn explicit_form() {
        let u = universe();
        let w = from_str(&u, r#"{"obj":["p"],"agents":{"a":{"poss":[{"obj":["p"]}],"imp":[{"obj":["p"]},{"obj":[]}]}}}"#).unwrap();
        assert_eq!(w.level(), 1);
        assert!(!w.is_completed());
        assert_eq!(to_json(&u, &Biworld::interpretation(1)), json!({"obj": ["p"]}));
    }

    #[test]
    fn rejects_bad_input() {
        let u = universe();
        let union = from_str(&u, r#"{"obj":[],"agents":{"a":{"poss":[{"obj":["p"]}],"imp":[]}}}"#).unwrap_err();
        assert_eq!(union.kind(), "UnionViolation");
        assert_eq!(from_str(&u, r#"{"obj":["q"]}"#).unwrap_err().kind(), "InvalidJson");
        assert_eq!(from_str(&u, r#"{"obj":[],"agents":{"b":{"poss":[],"imp":[]}}}"#).unwrap_err().kind(), "InvalidJson");
        assert_eq!(from_str(&u, "[").unwrap_err().kind(), "InvalidJson");
    }
}
