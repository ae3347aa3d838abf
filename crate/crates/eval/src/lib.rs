//! Three-valued valuation of formulas on finite-level biworlds.

mod context;
mod error;

pub use context::{EvalContext, Probe};
pub use error::EvalError;

use col_biworld::Biworld;
use col_syntax::{Formula, TruthValue};

pub fn eval3(phi: &Formula, w: &Biworld, ctx: &EvalContext) -> Result<TruthValue, EvalError> {
    ctx.eval(phi, w)
}

pub fn resolves(phi: &Formula, w: &Biworld, ctx: &EvalContext) -> Result<bool, EvalError> {
    Ok(ctx.eval(phi, w)?.is_resolved())
}
