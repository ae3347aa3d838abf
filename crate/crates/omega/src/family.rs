use serde_json::{json, Map, Value};

use crate::error::OmegaError;

/// Set of level-α biworlds, given a level α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    /// `{(g)_α}`
    PrevOf(String),
    All,
    Empty,
    Union(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    pub fn prev(name: &str) -> SetExpr {
        SetExpr::PrevOf(name.to_string())
    }

    /// Family names referenced through `PrevOf`.
    pub fn references(&self) -> Vec<&str> {
        match self {
            SetExpr::PrevOf(g) => vec![g.as_str()],
            SetExpr::All | SetExpr::Empty => Vec::new(),
            SetExpr::Union(a, b) | SetExpr::Diff(a, b) => {
                let mut r = a.references();
                r.extend(b.references());
                r
            }
        }
    }

    /// Built from `PrevOf`, `Empty` and unions of those only.
    pub fn is_finite_prev(&self) -> bool {
        match self {
            SetExpr::PrevOf(_) | SetExpr::Empty => true,
            SetExpr::Union(a, b) => a.is_finite_prev() && b.is_finite_prev(),
            SetExpr::All | SetExpr::Diff(..) => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SetExpr::PrevOf(g) => json!({ "prev": g }),
            SetExpr::All => json!("all"),
            SetExpr::Empty => json!("empty"),
            SetExpr::Union(a, b) => json!({ "union": [a.to_json(), b.to_json()] }),
            SetExpr::Diff(a, b) => json!({ "diff": [a.to_json(), b.to_json()] }),
        }
    }

    pub fn from_json(v: &Value) -> Result<SetExpr, OmegaError> {
        let bad = || OmegaError::Json(format!("not a set expression: {v}"));
        match v {
            Value::String(s) if s == "all" => Ok(SetExpr::All),
            Value::String(s) if s == "empty" => Ok(SetExpr::Empty),
            Value::Object(m) if m.len() == 1 => {
                let (k, inner) = m.iter().next().unwrap();
                match k.as_str() {
                    "prev" => Ok(SetExpr::PrevOf(inner.as_str().ok_or_else(bad)?.to_string())),
                    "union" => {
                        let items = inner.as_array().ok_or_else(bad)?;
                        let mut parts = items.iter().map(SetExpr::from_json);
                        let first = parts.next().ok_or_else(bad)??;
                        parts.try_fold(first, |acc, e| Ok(SetExpr::Union(Box::new(acc), Box::new(e?))))
                    }
                    "diff" => match inner.as_array().map(Vec::as_slice) {
                        Some([a, b]) => Ok(SetExpr::Diff(Box::new(SetExpr::from_json(a)?), Box::new(SetExpr::from_json(b)?))),
                        _ => Err(bad()),
                    },
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentRules {
    pub poss: SetExpr,
    pub imp: SetExpr,
}

/// `w_0` is the objective; `w_(α+1) = (objective, [poss]_α, [imp]_α)` per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicFamily {
    pub name: String,
    /// Atoms true in the objective.
    pub objective: Vec<String>,
    /// Rules keyed by agent name.
    pub rules: Vec<(String, AgentRules)>,
}

impl SymbolicFamily {
    pub fn rules_for(&self, agent: &str) -> Option<&AgentRules> {
        self.rules.iter().find(|(a, _)| a == agent).map(|(_, r)| r)
    }

    pub fn to_json(&self) -> Value {
        let mut rules = Map::new();
        for (a, r) in &self.rules {
            rules.insert(a.clone(), json!({ "poss": r.poss.to_json(), "imp": r.imp.to_json() }));
        }
        json!({ "name": self.name, "obj": self.objective, "rules": Value::Object(rules) })
    }

    pub fn from_json(v: &Value) -> Result<SymbolicFamily, OmegaError> {
        let err = |m: &str| OmegaError::Json(m.to_string());
        let name = v.get("name").and_then(Value::as_str).ok_or_else(|| err("family lacks \"name\""))?;
        let objective = v
            .get("obj")
            .and_then(Value::as_array)
            .ok_or_else(|| err("family lacks \"obj\""))?
            .iter()
            .map(|a| a.as_str().map(str::to_string).ok_or_else(|| err("atom names must be strings")))
            .collect::<Result<Vec<_>, _>>()?;
        let rules_v = v.get("rules").and_then(Value::as_object).ok_or_else(|| err("family lacks \"rules\""))?;
        let mut rules = Vec::new();
        for (agent, r) in rules_v {
            let side = |k: &str| r.get(k).ok_or_else(|| err(&format!("rule for '{agent}' lacks \"{k}\""))).and_then(SetExpr::from_json);
            rules.push((agent.clone(), AgentRules { poss: side("poss")?, imp: side("imp")? }));
        }
        Ok(SymbolicFamily { name: name.to_string(), objective, rules })
    }

    /// Accepts one family object, an array of them, or `{"families": [...]}`.
    pub fn list_from_json(v: &Value) -> Result<Vec<SymbolicFamily>, OmegaError> {
        match v {
            Value::Array(items) => items.iter().map(SymbolicFamily::from_json).collect(),
            Value::Object(m) if m.contains_key("families") => SymbolicFamily::list_from_json(&m["families"]),
            other => Ok(vec![SymbolicFamily::from_json(other)?]),
        }
    }
}
