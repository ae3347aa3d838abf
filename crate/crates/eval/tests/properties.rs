use std::collections::HashSet;
use std::sync::OnceLock;

use col_biworld::{extensions, Biworld, Universe, DEFAULT_CAP};
use col_eval::{eval3, resolves, EvalContext, Probe};
use col_syntax::{glb_t, Formula, FormulaGen, Signature, TruthValue};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_atom() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(["p"], ["a"]), 1, DEFAULT_CAP).unwrap())
}

fn no_atoms() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(Vec::<String>::new(), ["a"]), 2, DEFAULT_CAP).unwrap())
}

fn two_agents() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(["p"], ["a", "b"]), 1, DEFAULT_CAP).unwrap())
}

fn universe(which: usize) -> &'static Universe {
    [one_atom(), no_atoms(), two_agents()][which]
}

fn ctx(which: usize) -> &'static EvalContext<'static> {
    static C: OnceLock<Vec<EvalContext<'static>>> = OnceLock::new();
    &C.get_or_init(|| (0..3).map(|i| EvalContext::new(universe(i))).collect())[which]
}

/// Any level up to one above the registry, uniformly at the chosen level.
fn random_world(u: &Universe, rng: &mut ChaCha8Rng) -> Biworld {
    let level = rng.gen_range(0..=u.max_level() + 1);
    u.random_biworld(level, rng).unwrap()
}

/// Direct recursion on biworld values, with C computed by reachability.
fn oracle(u: &Universe, phi: &Formula, w: &Biworld) -> TruthValue {
    use TruthValue::*;
    let children = |a: &str, poss: bool| -> Vec<Biworld> {
        let i = u.agent_index(a).unwrap();
        let s = if poss { w.poss(i) } else { w.imp(i) };
        s.ones().map(|y| u.get(w.level() - 1, y)).collect()
    };
    match phi {
        Formula::Atom(p) => TruthValue::from_bool((w.obj() >> u.atom_index(p).unwrap()) & 1 == 1),
        Formula::True => T,
        Formula::False => F,
        Formula::Not(x) => oracle(u, x, w).inverse(),
        Formula::And(a, b) => oracle(u, a, w).meet(oracle(u, b, w)),
        Formula::Or(a, b) => oracle(u, a, w).join(oracle(u, b, w)),
        Formula::Implies(a, b) => oracle(u, a, w).inverse().join(oracle(u, b, w)),
        Formula::K(a, x) if w.level() > 0 => glb_t(children(a, true).iter().map(|v| oracle(u, x, v))),
        Formula::M(a, x) if w.level() > 0 => glb_t(children(a, false).iter().map(|v| oracle(u, x, v).inverse())),
        Formula::O(a, x) => oracle(u, &Formula::k(a, (**x).clone()), w).meet(oracle(u, &Formula::m(a, (**x).clone()), w)),
        Formula::E(g, x) => glb_t(g.members().iter().map(|a| oracle(u, &Formula::k(a, (**x).clone()), w))),
        Formula::C(g, x) => {
            let step = |v: &Biworld| -> Vec<Biworld> {
                if v.level() == 0 {
                    return Vec::new();
                }
                let mut out = Vec::new();
                for a in g.members() {
                    let i = u.agent_index(a).unwrap();
                    out.extend(v.poss(i).ones().map(|y| u.get(v.level() - 1, y)));
                }
                out
            };
            let mut seen: HashSet<Biworld> = HashSet::new();
            let mut stack = step(w);
            while let Some(v) = stack.pop() {
                if seen.insert(v.clone()) {
                    stack.extend(step(&v));
                }
            }
            let bottom = w.level() == 0 || seen.iter().any(|v| v.level() == 0);
            glb_t(seen.iter().map(|v| oracle(u, x, v)).chain(bottom.then_some(U)))
        }
        _ => U,
    }
}

#[test]
fn resolution_exhaustive_at_level_one() {
    let u = one_atom();
    let c = ctx(0);
    let gen = FormulaGen::new(u.signature(), 1, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let phi = gen.generate(&mut rng);
        for id in 0..u.size(1) {
            assert!(c.eval_id(&phi, 1, id).unwrap().is_resolved(), "{phi} at #{id}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_oracle(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = FormulaGen::new(u.signature(), 2, 8).with_c(true).generate(&mut rng);
        let w = random_world(u, &mut rng);
        prop_assert_eq!(eval3(&phi, &w, ctx(which)).unwrap(), oracle(u, &phi, &w), "{} at {:?}", phi, w);
    }

    #[test]
    fn precision_monotone_along_extensions(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = FormulaGen::new(u.signature(), 2, 10).with_c(true).generate(&mut rng);
        let level = rng.gen_range(0..=u.max_level());
        let w = u.get(level, rng.gen_range(0..u.size(level)));
        let exts = extensions(u, &w, 64).unwrap();
        let w2 = &exts[rng.gen_range(0..exts.len())];
        let (a, b) = (eval3(&phi, &w, ctx(which)).unwrap(), eval3(&phi, w2, ctx(which)).unwrap());
        prop_assert!(a.leq_p(b), "{} : {:?} then {:?}", phi, a, b);
    }

    #[test]
    fn resolution_when_deep_enough(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_world(u, &mut rng);
        let phi = FormulaGen::new(u.signature(), w.level() as u32, 10).generate(&mut rng);
        prop_assert!(resolves(&phi, &w, ctx(which)).unwrap(), "{}", phi);
    }

    #[test]
    fn sugar_matches_expansion(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = FormulaGen::new(u.signature(), 2, 10).with_c(true);
        let phi = gen.generate(&mut rng);
        let w = random_world(u, &mut rng);
        let c = ctx(which);
        prop_assert_eq!(eval3(&phi, &w, c).unwrap(), eval3(&phi.expand(), &w, c).unwrap());
        let a = &u.agents()[0];
        let o = eval3(&Formula::o(a, phi.clone()), &w, c).unwrap();
        let k = eval3(&Formula::k(a, phi.clone()), &w, c).unwrap();
        let m = eval3(&Formula::m(a, phi.clone()), &w, c).unwrap();
        prop_assert_eq!(o, glb_t([k, m]));
    }

    #[test]
    fn extended_probe_changes_nothing(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = FormulaGen::new(u.signature(), 2, 8).with_c(true).generate(&mut rng);
        let w = random_world(u, &mut rng);
        let wide = EvalContext::with_probe(u, Probe::Extended);
        prop_assert_eq!(eval3(&phi, &w, ctx(which)).unwrap(), eval3(&phi, &w, &wide).unwrap());
    }

    #[test]
    fn de_morgan_and_double_negation(seed in any::<u64>(), which in 0usize..3) {
        let u = universe(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = FormulaGen::new(u.signature(), 2, 6).with_c(true);
        let (a, b) = (gen.generate(&mut rng), gen.generate(&mut rng));
        let w = random_world(u, &mut rng);
        let c = ctx(which);
        let ev = |f: Formula| eval3(&f, &w, c).unwrap();
        prop_assert_eq!(ev(Formula::not(Formula::and(a.clone(), b.clone()))), ev(Formula::or(Formula::not(a.clone()), Formula::not(b.clone()))));
        prop_assert_eq!(ev(Formula::not(Formula::or(a.clone(), b.clone()))), ev(Formula::and(Formula::not(a.clone()), Formula::not(b.clone()))));
        prop_assert_eq!(ev(Formula::not(Formula::not(a.clone()))), ev(a));
    }
}
