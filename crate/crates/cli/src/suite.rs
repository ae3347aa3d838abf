//! Self-checks over small universes, one per property family. The fast profile keeps
//! the whole run to a few seconds; the full profile also builds the level-2 registry
//! of the one-atom universe (about 30 million biworlds) and uses larger samples.

use std::collections::HashSet;
use std::fmt::Display;
use std::time::Instant;

use col_biworld::{
    completed_extension, count_levels, extensions, incompleted_oracle, leq_p, restrict, AgentSets, Biworld,
    FixedBitSet, Universe,
};
use col_eval::EvalContext;
use col_kripke::{
    biworld_pi_closure, canonical_worlds, entails, frame_eval, kripke_eval, only_knows_world, pi_filter,
    pi_only_knows_world, CanonicalStructure, Mode,
};
use col_omega::{cg_survivors, cg_survivors_lifted, SymbolicSystem};
use col_syntax::{parse, Formula, FormulaGen, Group, Signature, TruthValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Profile;

/// Cap large enough for the one-atom level-2 registry.
const FULL_CAP: u64 = 40_000_000;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub profile: Profile,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{} {}: {} ({} ms)", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail, c.millis))
            .collect();
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push(format!("{} passed, {failed} failed (seed {})", self.checks.len() - failed, self.seed));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "profile": format!("{:?}", self.profile).to_lowercase(),
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                "millis": c.millis as u64,
            })).collect::<Vec<_>>(),
        })
    }
}

type CheckResult = Result<String, String>;

fn fail<E: Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Env {
    full: bool,
    seed: u64,
    one: Universe,
}

impl Env {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn f(&self, text: &str) -> Result<Formula, String> {
        parse(text, self.one.signature()).map_err(fail)
    }
}

fn universe(atoms: &[&str], agents: &[&str], level: usize, cap: u64) -> Result<Universe, String> {
    Universe::build(&Signature::new(atoms.iter().copied(), agents.iter().copied()), level, cap).map_err(fail)
}

pub fn run(profile: Profile, seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let one = match universe(&["p"], &["a"], 1, FULL_CAP) {
        Ok(u) => u,
        Err(e) => {
            checks.push(Check { name: "setup", passed: false, detail: e, millis: 0 });
            return SuiteReport { profile, seed, checks };
        }
    };
    let env = Env { full: profile == Profile::Full, seed, one };
    let table: [(&'static str, fn(&Env) -> CheckResult); 10] = [
        ("universe counts", counts),
        ("level-2 count", level_two),
        ("v family and unique extension", example_one),
        ("restriction and completion", completion),
        ("precision monotonicity", monotonicity),
        ("resolution", resolution),
        ("coincidence with the canonical structure", coincidence),
        ("axioms and only-knowing", axioms),
        ("common knowledge", common_knowledge),
        ("positive introspection", introspection),
    ];
    for (name, f) in table {
        let start = Instant::now();
        let r = f(&env);
        let millis = start.elapsed().as_millis();
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(Check { name, passed, detail, millis });
    }
    SuiteReport { profile, seed, checks }
}

fn counts(env: &Env) -> CheckResult {
    let u = &env.one;
    let rec = &count_levels(1, 1, 1)[1];
    let by_def = (0..u.size(1)).filter(|&i| !incompleted_oracle(u, &u.get(1, i)).unwrap_or(true)).count();
    let classified = (0..u.size(1)).filter(|&i| u.get(1, i).is_completed()).count();
    ensure(u.size(1) == 18 && rec.total.to_u64() == Some(18), || format!("sizes {} / {}", u.size(1), rec.total))?;
    ensure(classified == 8 && by_def == 8 && rec.completed.to_u64() == Some(8), || {
        format!("completed {classified} / {by_def} / {}", rec.completed)
    })?;
    Ok("18 level-1 biworlds, 8 completed, 10 incompleted".into())
}

fn level_two(env: &Env) -> CheckResult {
    let rec = &count_levels(1, 1, 2)[2];
    ensure(rec.total.to_u64() == Some(30_233_088), || format!("recurrence gives {}", rec.total))?;
    ensure(rec.completed.to_u64() == Some(524_288), || format!("recurrence gives {} completed", rec.completed))?;
    if !env.full {
        return Ok("recurrence gives 30233088".into());
    }
    let u = universe(&["p"], &["a"], 2, FULL_CAP)?;
    ensure(u.size(2) == 30_233_088, || format!("enumerated {}", u.size(2)))?;
    ensure(u.completed_count(2) == 524_288, || format!("enumerated {} completed", u.completed_count(2)))?;
    Ok("recurrence and enumeration give 30233088".into())
}

fn example_one(env: &Env) -> CheckResult {
    let u = &env.one;
    let sys = SymbolicSystem::default_system(u).map_err(fail)?;
    let v1 = sys.materialize("v", 1).map_err(fail)?;
    let ctx = EvalContext::new(u);
    let k = ctx.eval(&env.f("K[a] p")?, &v1).map_err(fail)?;
    let m = ctx.eval(&env.f("M[a] p")?, &v1).map_err(fail)?;
    ensure(k == TruthValue::T && m == TruthValue::F, || format!("K p = {k}, M p = {m}"))?;
    for obj in 0..2 {
        let w = Biworld::interpretation(obj);
        ensure(!w.is_completed() && incompleted_oracle(u, &w).map_err(fail)?, || "level-0 world completed".into())?;
    }
    for name in ["v", "u"] {
        for k in 0..=2 {
            let w = sys.materialize(name, k).map_err(fail)?;
            ensure(!w.is_completed(), || format!("{name}{k} is completed"))?;
        }
    }
    // poss = {{p}}, imp = {{}}
    let w = Biworld::from_parts(1, 1, vec![AgentSets::new(set(2, &[1]), set(2, &[0]))]);
    let n = extensions(u, &w, usize::MAX).map_err(fail)?.len();
    ensure(w.is_completed() && n == 1, || format!("{n} extensions"))?;
    Ok("v1: K p = t, M p = f; prefixes incompleted; one extension".into())
}

fn set(n: usize, xs: &[usize]) -> FixedBitSet {
    col_biworld::id_set(n, xs.iter().copied())
}

/// A uniformly chosen extension of `w` one level up.
fn random_extension<R: Rng>(u: &Universe, w: &Biworld, rng: &mut R) -> Biworld {
    let k = w.level();
    if k == 0 {
        return u.random_biworld(1, rng).expect("level 1 is built").with_obj(w.obj());
    }
    let n = u.size(k);
    let agents = w
        .agents()
        .iter()
        .map(|s| {
            let mut poss = FixedBitSet::with_capacity(n);
            let mut imp = FixedBitSet::with_capacity(n);
            for x in 0..u.size(k - 1) {
                let fib = u.fiber(k, x);
                match (s.poss.contains(x), s.imp.contains(x)) {
                    (true, false) => poss.insert_range(fib),
                    (false, true) => imp.insert_range(fib),
                    _ => loop {
                        let digits: Vec<u32> = fib
                            .clone()
                            .map(|y| rng.gen_range(0..if u.is_completed_id(k, y) { 2 } else { 3 }))
                            .collect();
                        if digits.iter().any(|&d| d != 1) && digits.iter().any(|&d| d != 0) {
                            for (y, d) in fib.clone().zip(digits) {
                                if d != 1 {
                                    poss.insert(y);
                                }
                                if d != 0 {
                                    imp.insert(y);
                                }
                            }
                            break;
                        }
                    },
                }
            }
            AgentSets::new(poss, imp)
        })
        .collect();
    Biworld::from_parts(k + 1, w.obj(), agents)
}

fn completion(env: &Env) -> CheckResult {
    let u = &env.one;
    let mut rng = env.rng(4);
    let mut pool: Vec<Biworld> = (0..2).map(Biworld::interpretation).chain(u.iter_level(1)).collect();
    let samples = if env.full { 5000 } else { 1000 };
    for _ in 0..samples {
        pool.push(u.random_biworld(2, &mut rng).map_err(fail)?);
    }
    for w in &pool {
        for alpha in 0..w.level() {
            let r = restrict(u, w, alpha).map_err(fail)?;
            ensure(u.contains(&r), || format!("restriction to {alpha} not registered"))?;
            ensure(!r.is_completed() || w.is_completed(), || "completedness not monotone".into())?;
        }
        if w.level() <= 1 {
            let c = completed_extension(u, w).map_err(fail)?;
            ensure(c.is_completed() && leq_p(u, w, &c), || "completed_extension failed".into())?;
            ensure(incompleted_oracle(u, w).map_err(fail)? == !w.is_completed(), || "completedness oracle".into())?;
        }
    }
    // the definitional oracle at level 2 on the atomless universe, whose level 2 is small
    let empty = universe(&[], &["a"], 2, FULL_CAP)?;
    for _ in 0..samples {
        let w = empty.random_biworld(2, &mut rng).map_err(fail)?;
        let c = completed_extension(&empty, &w).map_err(fail)?;
        ensure(c.is_completed() && leq_p(&empty, &w, &c), || "completed_extension failed".into())?;
        ensure(incompleted_oracle(&empty, &w).map_err(fail)? == !w.is_completed(), || "level-2 oracle".into())?;
    }
    if env.full {
        let big = universe(&["p"], &["a"], 2, FULL_CAP)?;
        for _ in 0..samples {
            let w = big.get(2, rng.gen_range(0..big.size(2)));
            let c = completed_extension(&big, &w).map_err(fail)?;
            ensure(c.is_completed() && leq_p(&big, &w, &c), || "completed_extension failed".into())?;
            ensure(incompleted_oracle(&big, &w).map_err(fail)? == !w.is_completed(), || "level-2 oracle".into())?;
        }
    }
    Ok(format!("{} biworlds up to level 2", pool.len()))
}

fn monotonicity(env: &Env) -> CheckResult {
    let u = &env.one;
    let mut rng = env.rng(5);
    let ctx = EvalContext::new(u);
    let gen = FormulaGen::new(u.signature(), 2, 8).with_c(true);
    let cases = 10_000;
    for _ in 0..cases {
        let phi = gen.generate(&mut rng);
        let lo = u.random_biworld(rng.gen_range(0..=1), &mut rng).map_err(fail)?;
        let mut hi = random_extension(u, &lo, &mut rng);
        if lo.level() == 0 && rng.gen_bool(0.5) {
            hi = random_extension(u, &hi, &mut rng);
        }
        let (a, b) = (ctx.eval(&phi, &lo).map_err(fail)?, ctx.eval(&phi, &hi).map_err(fail)?);
        ensure(a.leq_p(b), || format!("{phi}: {a} then {b}"))?;
    }
    Ok(format!("{cases} pairs"))
}

fn resolution(env: &Env) -> CheckResult {
    let u = &env.one;
    let mut rng = env.rng(6);
    let ctx = EvalContext::new(u);
    let pool: Vec<Formula> = (0..300).map(|_| FormulaGen::new(u.signature(), 1, 8).generate(&mut rng)).collect();
    for phi in &pool {
        for w in u.iter_level(1) {
            let v = ctx.eval(phi, &w).map_err(fail)?;
            ensure(v != TruthValue::U, || format!("{phi} unresolved"))?;
        }
    }
    let gen2 = FormulaGen::new(u.signature(), 2, 8);
    for _ in 0..500 {
        let phi = gen2.generate(&mut rng);
        let w = u.random_biworld(2, &mut rng).map_err(fail)?;
        ensure(ctx.eval(&phi, &w).map_err(fail)? != TruthValue::U, || format!("{phi} unresolved at level 2"))?;
    }
    Ok(format!("{} formulas on 18 biworlds, 500 at level 2", pool.len()))
}

fn agree(s: &CanonicalStructure, ctx: &EvalContext, phi: &Formula, worlds: &[usize]) -> Result<(), String> {
    for &i in worlds {
        let v = ctx.eval(phi, &s.world(i)).map_err(fail)?;
        let k = kripke_eval(phi, i, s).map_err(fail)?;
        ensure(v == TruthValue::from_bool(k), || format!("{phi} at world {i}: {v} vs {k}"))?;
    }
    Ok(())
}

fn coincidence(env: &Env) -> CheckResult {
    let u = &env.one;
    let mut rng = env.rng(7);
    let ctx = EvalContext::new(u);
    let s0 = canonical_worlds(u, 0, FULL_CAP, Mode::Exhaustive).map_err(fail)?;
    let all: Vec<usize> = (0..s0.len()).collect();
    for _ in 0..200 {
        agree(&s0, &ctx, &FormulaGen::new(u.signature(), 1, 8).generate(&mut rng), &all)?;
    }
    let count = 5000;
    let s1 = canonical_worlds(u, 1, FULL_CAP, Mode::Sampled { count, seed: env.seed }).map_err(fail)?;
    let picked: Vec<usize> = (0..s1.len()).collect();
    for _ in 0..20 {
        agree(&s1, &ctx, &FormulaGen::new(u.signature(), 1, 8).generate(&mut rng), &picked)?;
    }
    Ok(format!("{} worlds at k=0, {} sampled at k=1", s0.len(), s1.len()))
}

fn valid(s: &CanonicalStructure, phi: &Formula) -> Result<bool, String> {
    Ok(s.truth_set(phi).map_err(fail)?.count_ones(..) == s.len())
}

fn axioms(env: &Env) -> CheckResult {
    let u = &env.one;
    let two = universe(&["p", "q"], &["a"], 1, FULL_CAP)?;
    let s0 = canonical_worlds(&two, 0, FULL_CAP, Mode::Exhaustive).map_err(fail)?;
    let s1 = canonical_worlds(u, 1, FULL_CAP, Mode::Sampled { count: 1000, seed: env.seed }).map_err(fail)?;
    let mut rng = env.rng(8);
    for (uu, s) in [(&two, &s0), (u, &s1)] {
        let gen = FormulaGen::new(uu.signature(), s.base_level() as u32, 6);
        for _ in 0..30 {
            let (phi, psi) = (gen.generate(&mut rng), gen.generate(&mut rng));
            let ax = Formula::implies(
                Formula::and(Formula::k("a", Formula::implies(phi.clone(), psi.clone())), Formula::k("a", phi.clone())),
                Formula::k("a", psi.clone()),
            );
            ensure(valid(s, &ax)?, || format!("K fails for {phi}, {psi}"))?;
            let mp = Formula::implies(Formula::and(phi.clone(), Formula::implies(phi.clone(), psi.clone())), psi);
            ensure(valid(s, &mp)?, || "MP fails".into())?;
            if valid(s, &phi)? {
                ensure(valid(s, &Formula::k("a", phi.clone()))?, || format!("Nec fails for {phi}"))?;
            }
        }
    }
    let p2 = |t: &str| parse(t, two.signature()).map_err(fail);
    let m = entails(&[p2("M[a] p")?], &p2("~K[a] q")?, &s0).map_err(fail)?;
    ensure(m.holds, || "M[a] p does not entail ~K[a] q".into())?;
    for text in ["p", "~p", "true", "false", "p & q"] {
        let phi = p2(text)?;
        let o = Formula::o("a", phi.clone());
        let w = only_knows_world(&phi, "a", 0, &two).map_err(fail)?;
        let v = EvalContext::new(&two).eval(&o, &w).map_err(fail)?;
        ensure(v == TruthValue::T, || format!("only-knowing {text} gives {v}"))?;
        let sat = s0.truth_set(&o).map_err(fail)?;
        let pairs: HashSet<FixedBitSet> = sat.ones().map(|i| s0.poss(i, 0).clone()).collect();
        ensure(pairs.len() == 1 && sat.count_ones(..) == 4, || format!("{text}: {} pairs", pairs.len()))?;
    }
    let kp = env.f("K[a] p")?;
    let w = only_knows_world(&kp, "a", 1, u).map_err(fail)?;
    let v = EvalContext::new(u).eval(&Formula::o("a", kp), &w).map_err(fail)?;
    ensure(v == TruthValue::T, || format!("only-knowing K[a] p gives {v}"))?;
    Ok("K, MP, Nec, M instance, O for six formulas, uniqueness".into())
}

fn common_knowledge(env: &Env) -> CheckResult {
    let u = &env.one;
    let ctx = EvalContext::new(u);
    let a = Group::single("a");
    let p = env.f("p")?;
    // ({p}, {}, W0)
    let vac = Biworld::from_parts(1, 1, vec![AgentSets::new(set(2, &[]), set(2, &[0, 1]))]);
    let v = ctx.eval(&Formula::c(a.clone(), p.clone()), &vac).map_err(fail)?;
    ensure(v == TruthValue::T, || format!("vacuous world gives {v}"))?;
    let sys = SymbolicSystem::default_system(u).map_err(fail)?;
    for name in ["v", "u"] {
        let v = sys.eval_cg_closure(&p, &a, name).map_err(fail)?;
        ensure(v == TruthValue::T, || format!("closure at {name} gives {v}"))?;
    }
    let surv = cg_survivors(&p, &a, 1, u).map_err(fail)?;
    let cp = Formula::c(a.clone(), p.clone());
    let brute: Vec<usize> =
        (0..u.size(1)).filter(|&i| ctx.eval_id(&cp, 1, i).map(|v| v != TruthValue::F).unwrap_or(false)).collect();
    ensure(surv == brute, || format!("survivors {surv:?} vs {brute:?}"))?;
    for name in ["v", "u"] {
        let w = sys.materialize(name, 1).map_err(fail)?;
        ensure(surv.contains(&u.lookup(&w).unwrap_or(usize::MAX)), || format!("{name}1 missing"))?;
    }
    let lifted = cg_survivors_lifted(&p, &a, 2, u).map_err(fail)?;
    for w in &lifted {
        let r = u.lookup(&restrict(u, w, 1).map_err(fail)?).unwrap_or(usize::MAX);
        ensure(surv.contains(&r), || "level-2 survivor restricts outside the level-1 survivors".into())?;
    }
    Ok(format!("{} survivors at level 1, {} at level 2", surv.len(), lifted.len()))
}

fn introspection(env: &Env) -> CheckResult {
    let mut rng = env.rng(10);
    let mut kept_total = 0;
    for (atoms, agents) in [(&["p"][..], &["a"][..]), (&["p", "q"][..], &["a"][..]), (&["p"][..], &["a", "b"][..])] {
        let u = universe(atoms, agents, 0, FULL_CAP)?;
        let s = canonical_worlds(&u, 0, FULL_CAP, Mode::Exhaustive).map_err(fail)?;
        let kept = pi_filter(&s);
        kept_total += kept.len();
        let gen = FormulaGen::new(u.signature(), 1, 6);
        for _ in 0..40 {
            let phi = gen.generate(&mut rng);
            for a in u.agents() {
                let ax = Formula::implies(Formula::k(a, phi.clone()), Formula::k(a, Formula::k(a, phi.clone())));
                for i in 0..kept.len() {
                    ensure(frame_eval(&ax, i, &kept).map_err(fail)?, || format!("{ax} fails"))?;
                }
            }
        }
    }
    let mut built = 0;
    for atoms in [&["p"][..], &["p", "q"][..]] {
        let u = universe(atoms, &["a"], 1, FULL_CAP)?;
        for phi in truth_functions(atoms) {
            for obj in 0..u.size(0) as u64 {
                let w = pi_only_knows_world(&phi, "a", obj, &u).map_err(fail)?;
                ensure(biworld_pi_closure(&u, &w).map_err(fail)?, || format!("{phi}: not introspective"))?;
                built += 1;
            }
        }
    }
    Ok(format!("{kept_total} filtered worlds, {built} constructed worlds"))
}

/// One formula per boolean function of the atoms, in disjunctive normal form.
pub fn truth_functions(atoms: &[&str]) -> Vec<Formula> {
    let rows = 1usize << atoms.len();
    (0..1u64 << rows)
        .map(|table| {
            (0..rows)
                .filter(|r| (table >> r) & 1 == 1)
                .map(|r| {
                    atoms
                        .iter()
                        .enumerate()
                        .map(|(i, a)| if (r >> i) & 1 == 1 { Formula::atom(a) } else { Formula::not(Formula::atom(a)) })
                        .fold(Formula::True, Formula::and)
                })
                .reduce(Formula::or)
                .unwrap_or(Formula::False)
        })
        .collect()
}
