use col_biworld::{Biworld, Extensions, Universe};
use col_eval::EvalContext;
use col_syntax::{Formula, Group, TruthValue};

use crate::error::OmegaError;

/// Ids of the level-k biworlds at which `C_G phi` is not false.
pub fn cg_survivors(phi: &Formula, group: &Group, k: usize, u: &Universe) -> Result<Vec<usize>, OmegaError> {
    u.require_level(k)?;
    let ctx = EvalContext::new(u);
    let c = Formula::c(group.clone(), phi.clone());
    let mut out = Vec::new();
    for id in 0..u.size(k) {
        if ctx.eval_id(&c, k, id)? != TruthValue::F {
            out.push(id);
        }
    }
    Ok(out)
}

/// The same set as biworlds, for any k up to one above the registry. A survivor restricts
/// to a survivor, so each level is found among the extensions of the previous one.
pub fn cg_survivors_lifted(phi: &Formula, group: &Group, k: usize, u: &Universe) -> Result<Vec<Biworld>, OmegaError> {
    if k > u.max_level() + 1 {
        return Err(col_biworld::BiworldError::UnbuiltLevel(k - 1).into());
    }
    let ctx = EvalContext::new(u);
    let c = Formula::c(group.clone(), phi.clone());
    let mut level: Vec<Biworld> = Vec::new();
    for obj in 0..u.size(0) as u64 {
        let w = Biworld::interpretation(obj);
        if ctx.eval(&c, &w)? != TruthValue::F {
            level.push(w);
        }
    }
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &level {
            for e in Extensions::new(u, w)? {
                if ctx.eval(&c, &e)? != TruthValue::F {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    Ok(level)
}
