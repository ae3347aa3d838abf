use col_biworld::{count_levels, json as bjson, Biworld, Universe};
use col_eval::{EvalContext, Probe};
use col_kripke::{canonical_worlds, entails, only_knows_world, pi_only_knows_world, Mode};
use col_omega::{cg_survivors_lifted, example3_world, SymbolicFamily, SymbolicSystem, Verdict};
use col_syntax::{parse, render, Formula, Group};
use serde_json::{json, Value};

use crate::config::SessionConfig;
use crate::output::{CliError, Output, EXIT_CHECK_FAILED, EXIT_OK};
use crate::{suite, Command, SymbolicAction};

pub(crate) fn dispatch(s: &SessionConfig, cmd: Command, out: &mut Output) -> Result<i32, CliError> {
    match cmd {
        Command::Parse { formula } => parse_cmd(s, &formula, out),
        Command::Count { level } => count_cmd(s, level, out),
        Command::Enumerate { level, limit } => enumerate_cmd(s, level, limit, out),
        Command::Eval { formula, world, extended_probe } => eval_cmd(s, &formula, &world, extended_probe, out),
        Command::Kripke { k, formula, world, premise, sample } => {
            kripke_cmd(s, k, &formula, world.as_deref(), &premise, sample, out)
        }
        Command::Models { k, formula, limit, oknow, pi, agent, obj } => {
            if oknow {
                oknow_cmd(s, &formula, pi, agent.as_deref(), &obj, out)
            } else {
                models_cmd(s, k, &formula, limit, out)
            }
        }
        Command::Symbolic { families, build, action } => symbolic_cmd(s, families.as_deref(), build, action, out),
        Command::Suite { profile } => {
            let report = suite::run(profile, s.seed);
            if out.json {
                out.value = report.to_json();
            } else {
                for l in report.lines() {
                    out.line(l);
                }
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

/// Inline text, or the contents of a file when prefixed with `@`.
fn read_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::usage("Io", format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_json(arg: &str) -> Result<Value, CliError> {
    serde_json::from_str(&read_arg(arg)?).map_err(|e| CliError::usage("InvalidJson", e.to_string()))
}

fn formula(s: &SessionConfig, text: &str) -> Result<Formula, CliError> {
    Ok(parse(&read_arg(text)?, &s.signature())?)
}

fn group(s: &SessionConfig, text: &str) -> Result<Group, CliError> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    for a in &names {
        if !s.agents.iter().any(|b| b == a) {
            return Err(CliError::usage("UndeclaredAgent", format!("undeclared agent '{a}'")));
        }
    }
    Group::new(names).ok_or_else(|| CliError::usage("EmptyGroup", "the group must not be empty"))
}

fn objective(u: &Universe, text: &str) -> Result<u64, CliError> {
    let mut obj = 0u64;
    for a in text.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let i = u.atom_index(a).ok_or_else(|| CliError::usage("UndeclaredAtom", format!("undeclared atom '{a}'")))?;
        obj |= 1 << i;
    }
    Ok(obj)
}

/// Level of a biworld in JSON form, from the nesting of its sets.
fn json_level(v: &Value) -> Option<usize> {
    let Some(agents) = v.get("agents").and_then(Value::as_object) else {
        return Some(0);
    };
    let mut deepest = None;
    for sets in agents.values() {
        for key in ["poss", "imp"] {
            for child in sets.get(key).and_then(Value::as_array).into_iter().flatten() {
                deepest = deepest.max(json_level(child));
            }
        }
    }
    deepest.map(|d| d + 1)
}

/// Parses a world, building the registry just below its level.
fn load_world(s: &SessionConfig, arg: &str) -> Result<(Universe, Biworld), CliError> {
    let v = read_json(arg)?;
    let level = json_level(&v).ok_or_else(|| CliError::usage("InvalidJson", "cannot infer the level of a biworld whose sets are all empty"))?;
    let u = s.universe(level.saturating_sub(1))?;
    let w = bjson::from_json(&u, &v)?;
    Ok((u, w))
}

fn parse_cmd(s: &SessionConfig, text: &str, out: &mut Output) -> Result<i32, CliError> {
    let f = formula(s, text)?;
    let md = f.modal_depth();
    out.line(render(&f));
    out.line(format!("modal depth: {md}"));
    out.value = json!({ "formula": render(&f), "modal_depth": md.to_string(), "c_free": f.is_c_free(), "size": f.size() });
    Ok(EXIT_OK)
}

fn count_cmd(s: &SessionConfig, level: usize, out: &mut Output) -> Result<i32, CliError> {
    let rows = count_levels(s.atoms.len(), s.agents.len(), level);
    let mut arr = Vec::new();
    for r in rows {
        out.line(format!("level={} total={} completed={} incompleted={}", r.level, r.total, r.completed, r.incompleted));
        arr.push(json!({
            "level": r.level,
            "total": r.total.to_string(),
            "completed": r.completed.to_string(),
            "incompleted": r.incompleted.to_string(),
        }));
    }
    out.value = Value::Array(arr);
    Ok(EXIT_OK)
}

fn enumerate_cmd(s: &SessionConfig, level: usize, limit: Option<usize>, out: &mut Output) -> Result<i32, CliError> {
    let u = s.universe(level)?;
    let n = u.size(level);
    let shown = limit.unwrap_or(n).min(n);
    let mut arr = Vec::new();
    for id in 0..shown {
        let w = u.get(level, id);
        let j = bjson::to_json(&u, &w);
        let c = level > 0 && u.is_completed_id(level, id);
        out.line(format!("#{id} {} {j}", if c { "completed" } else { "incompleted" }));
        arr.push(json!({ "id": id, "completed": c, "world": j }));
    }
    out.line(format!("total={n} completed={}", if level == 0 { 0 } else { u.completed_count(level) }));
    out.value = json!({ "level": level, "total": n, "biworlds": arr });
    Ok(EXIT_OK)
}

fn eval_cmd(s: &SessionConfig, text: &str, world: &str, extended: bool, out: &mut Output) -> Result<i32, CliError> {
    let f = formula(s, text)?;
    let (u, w) = load_world(s, world)?;
    let ctx = EvalContext::with_probe(&u, if extended { Probe::Extended } else { Probe::Standard });
    let v = ctx.eval(&f, &w)?;
    out.line(v.to_string());
    out.value = json!({ "formula": render(&f), "level": w.level(), "value": v.to_string() });
    Ok(EXIT_OK)
}

const ANALOG_NOTE: &str = "common knowledge evaluated by reachability on the finite structure";

fn kripke_cmd(
    s: &SessionConfig,
    k: usize,
    text: &str,
    world: Option<&str>,
    premises: &[String],
    sample: Option<usize>,
    out: &mut Output,
) -> Result<i32, CliError> {
    let f = formula(s, text)?;
    let gamma: Vec<Formula> = premises.iter().map(|p| formula(s, p)).collect::<Result<_, _>>()?;
    let u = s.universe(k)?;
    let mode = match sample {
        Some(count) => Mode::Sampled { count, seed: s.seed },
        None => Mode::Exhaustive,
    };
    let st = canonical_worlds(&u, k, s.cap, mode)?;
    let has_c = !f.is_c_free() || gamma.iter().any(|g| !g.is_c_free());
    if let Some(warg) = world {
        let w = bjson::from_json(&u, &read_json(warg)?)?;
        let i = st.index_of(&w).ok_or_else(|| CliError::usage("NotAWorld", format!("not a world of the level-{} structure", k + 1)))?;
        let v = col_kripke::kripke_eval(&f, i, &st)?;
        out.line(v.to_string());
        if has_c {
            out.line(format!("note: {ANALOG_NOTE}"));
        }
        out.value = json!({ "formula": render(&f), "value": v, "worlds": st.len(), "sampled": st.is_sampled(), "reachability_analog": has_c });
    } else {
        let e = entails(&gamma, &f, &st)?;
        let cm = e.countermodel.map(|i| bjson::to_json(&u, &st.world(i)));
        out.line(if e.holds { "entailed" } else { "not entailed" });
        out.line(format!("worlds: {}", st.len()));
        if let Some(c) = &cm {
            out.line(format!("countermodel: {c}"));
        }
        if e.advisory {
            out.line("note: the structure is sampled; a positive verdict is advisory");
        }
        if has_c {
            out.line(format!("note: {ANALOG_NOTE}"));
        }
        out.value = json!({
            "premises": gamma.iter().map(render).collect::<Vec<_>>(),
            "formula": render(&f),
            "entailed": e.holds,
            "countermodel": cm,
            "advisory": e.advisory,
            "worlds": st.len(),
            "reachability_analog": has_c,
        });
    }
    Ok(EXIT_OK)
}

fn models_cmd(s: &SessionConfig, k: usize, text: &str, limit: usize, out: &mut Output) -> Result<i32, CliError> {
    let f = formula(s, text)?;
    let u = s.universe(k)?;
    let st = canonical_worlds(&u, k, s.cap, Mode::Exhaustive)?;
    let set = st.truth_set(&f)?;
    let models: Vec<Value> = set.ones().take(limit).map(|i| bjson::to_json(&u, &st.world(i))).collect();
    for m in &models {
        out.line(m.to_string());
    }
    out.line(format!("models: {} of {}", set.count_ones(..), st.len()));
    out.value = json!({ "formula": render(&f), "count": set.count_ones(..), "worlds": st.len(), "models": models });
    Ok(EXIT_OK)
}

fn oknow_cmd(s: &SessionConfig, text: &str, pi: bool, agent: Option<&str>, obj: &str, out: &mut Output) -> Result<i32, CliError> {
    let f = formula(s, text)?;
    let a = agent.unwrap_or(&s.agents[0]);
    if !s.agents.iter().any(|b| b == a) {
        return Err(CliError::usage("UndeclaredAgent", format!("undeclared agent '{a}'")));
    }
    let d = f.finite_depth().ok_or_else(|| CliError::from(col_kripke::KripkeError::InfiniteDepth))? as usize;
    let u = s.universe(if pi { d + 1 } else { d })?;
    let o = objective(&u, obj)?;
    let w = if pi { pi_only_knows_world(&f, a, o, &u)? } else { only_knows_world(&f, a, o, &u)? };
    let target = if pi { Formula::and(f.clone(), Formula::k(a, f.clone())) } else { f.clone() };
    let check = EvalContext::new(&u).eval(&Formula::o(a, target.clone()), &w)?;
    let j = bjson::to_json(&u, &w);
    out.line(j.to_string());
    out.line(format!("{} = {check}", render(&Formula::o(a, target))));
    out.value = json!({ "world": j, "level": w.level(), "completed": w.is_completed(), "check": check.to_string() });
    Ok(EXIT_OK)
}

fn symbolic_cmd(
    s: &SessionConfig,
    families: Option<&str>,
    build: usize,
    action: SymbolicAction,
    out: &mut Output,
) -> Result<i32, CliError> {
    let u = s.universe(build)?;
    let sys = match families {
        Some(arg) => SymbolicSystem::new(&u, SymbolicFamily::list_from_json(&read_json(arg)?)?)?,
        None => SymbolicSystem::default_system(&u)?,
    };
    match action {
        SymbolicAction::Materialize { family, level } => {
            let w = sys.materialize(&family, level)?;
            let j = bjson::to_json(&u, &w);
            out.line(j.to_string());
            out.line(if w.is_completed() { "completed" } else { "incompleted" });
            out.value = json!({ "family": family, "level": level, "world": j, "completed": w.is_completed() });
        }
        SymbolicAction::Eval { family, formula: text, kmax } => {
            let f = formula(s, &text)?;
            let r = sys.eval_omega(&f, &family, kmax)?;
            let levels: Vec<String> = r.levels.iter().map(|v| v.to_string()).collect();
            out.line(r.value.to_string());
            out.line(format!("levels 0..{}: {}", levels.len() - 1, levels.join(" ")));
            out.value = json!({ "family": family, "formula": render(&f), "value": r.value.to_string(), "levels": levels });
        }
        SymbolicAction::Closure { family, formula: text, group: g } => {
            let f = formula(s, &text)?;
            let g = group(s, &g)?;
            let members: Vec<String> = sys.cg_closure(&g, &family)?.into_iter().collect();
            let v = sys.eval_cg_closure(&f, &g, &family)?;
            out.line(v.to_string());
            out.line(format!("closure: {}", members.join(",")));
            out.value = json!({ "family": family, "formula": render(&f), "group": g.to_string(), "closure": members, "value": v.to_string() });
        }
        SymbolicAction::Survivors { formula: text, group: g, level } => {
            let f = formula(s, &text)?;
            let g = group(s, &g)?;
            let surv = cg_survivors_lifted(&f, &g, level, &u)?;
            let worlds: Vec<Value> = surv.iter().map(|w| bjson::to_json(&u, w)).collect();
            for w in &worlds {
                out.line(w.to_string());
            }
            out.line(format!("survivors: {}", surv.len()));
            out.value = json!({ "formula": render(&f), "group": g.to_string(), "level": level, "count": surv.len(), "survivors": worlds });
        }
        SymbolicAction::Example3 { obj } => {
            let o = objective(&u, &obj)?;
            let ex = example3_world(&sys, o)?;
            out.line(format!("world: {}", ex.world));
            match &ex.verdict {
                Verdict::ConditionalTrue { assumption } => {
                    out.line(format!("O[{0}] ~C[{{{0}}}] p = t, conditional on: {assumption}", ex.agent))
                }
                Verdict::Unsupported { reason } => out.line(format!("unsupported: {reason}")),
            }
            for e in &ex.evidence {
                out.line(format!(
                    "level {}: {} survivors, v prefix {}, u prefix {}",
                    e.level,
                    e.survivors,
                    if e.v_member { "present" } else { "absent" },
                    if e.u_member { "present" } else { "absent" },
                ));
            }
            out.value = ex.to_json(&sys);
        }
    }
    Ok(EXIT_OK)
}
