use std::sync::OnceLock;

use col_biworld::{incompleted_oracle, restrict, Universe, DEFAULT_CAP};
use col_eval::EvalContext;
use col_omega::{cg_survivors, cg_survivors_lifted, example3_world, SymbolicSystem, Verdict};
use col_syntax::{parse, Formula, FormulaGen, Group, Signature, TruthValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_atom() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(["p"], ["a"]), 1, DEFAULT_CAP).unwrap())
}

fn g() -> Group {
    Group::single("a")
}

#[test]
fn level_one_survivors_match_brute_force() {
    let u = one_atom();
    let s = SymbolicSystem::default_system(u).unwrap();
    let surv = cg_survivors(&Formula::atom("p"), &g(), 1, u).unwrap();
    // brute force: C p is not false iff nothing without p is deemed possible
    let expected: Vec<usize> = (0..u.size(1)).filter(|&id| u.poss_ids(1, id, 0).iter().all(|&x| x == 1)).collect();
    assert_eq!(surv, expected);
    assert_eq!(surv.len(), 6);
    for name in ["v", "u"] {
        let w = s.materialize(name, 1).unwrap();
        assert!(surv.contains(&u.lookup(&w).unwrap()));
    }
    assert_eq!(cg_survivors(&Formula::atom("p"), &g(), 0, u).unwrap(), vec![0, 1]);
    let contradiction = parse("p & ~p", u.signature()).unwrap();
    let empty_poss: Vec<usize> = (0..u.size(1)).filter(|&id| u.poss_ids(1, id, 0).is_empty()).collect();
    assert_eq!(cg_survivors(&contradiction, &g(), 1, u).unwrap(), empty_poss);
}

#[test]
fn lifted_survivors_agree_with_registry() {
    let u = Universe::build(&Signature::new(Vec::<String>::new(), ["a"]), 3, DEFAULT_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gen = FormulaGen::new(u.signature(), 1, 5);
    for _ in 0..10 {
        let phi = gen.generate(&mut rng);
        for k in 0..=3 {
            let ids = cg_survivors(&phi, &g(), k, &u).unwrap();
            let mut lifted: Vec<usize> =
                cg_survivors_lifted(&phi, &g(), k, &u).unwrap().iter().map(|w| u.lookup(w).unwrap()).collect();
            lifted.sort();
            assert_eq!(ids, lifted, "{phi} at {k}");
        }
    }
}

#[test]
fn survivors_shrink_under_restriction() {
    let u = one_atom();
    let p = Formula::atom("p");
    let lower = cg_survivors(&p, &g(), 1, u).unwrap();
    let ctx = EvalContext::new(u);
    let c = Formula::c(g(), p.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3000 {
        let w = u.random_biworld(2, &mut rng).unwrap();
        if ctx.eval(&c, &w).unwrap() != TruthValue::F {
            let r = restrict(u, &w, 1).unwrap();
            assert!(lower.contains(&u.lookup(&r).unwrap()));
        }
    }
    for w in cg_survivors_lifted(&p, &g(), 2, u).unwrap() {
        assert!(lower.contains(&u.lookup(&restrict(u, &w, 1).unwrap()).unwrap()));
    }
}

#[test]
fn prefixes_form_incompleted_chains() {
    let u = one_atom();
    let s = SymbolicSystem::default_system(u).unwrap();
    for name in ["v", "u"] {
        for k in 0..=2 {
            let w = s.materialize(name, k).unwrap();
            u.validate(&w).unwrap();
            if k > 0 {
                assert_eq!(restrict(u, &w, k - 1).unwrap(), s.materialize(name, k - 1).unwrap());
            }
            if k <= 1 {
                assert!(incompleted_oracle(u, &w).unwrap());
                assert!(u.contains(&w));
            } else {
                assert!(!w.is_completed());
            }
        }
    }
}

#[test]
fn omega_values_never_flip() {
    let u = one_atom();
    let s = SymbolicSystem::default_system(u).unwrap();
    let gen = FormulaGen::new(u.signature(), 3, 8).with_c(true);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let phi = gen.generate(&mut rng);
        for name in ["v", "u"] {
            let full = s.eval_omega(&phi, name, 3).unwrap();
            for (i, w) in full.levels.windows(2).enumerate() {
                assert!(w[0].leq_p(w[1]), "{phi} at {name}, level {i}");
            }
            let short = s.eval_omega(&phi, name, rng.gen_range(0..3)).unwrap();
            assert!(short.value.leq_p(full.value));
        }
    }
}

#[test]
fn closure_true_means_everybody_knows_is_not_false() {
    let u = one_atom();
    let s = SymbolicSystem::default_system(u).unwrap();
    let gen = FormulaGen::new(u.signature(), 1, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ctx = EvalContext::new(u);
    for _ in 0..200 {
        let phi = gen.generate(&mut rng);
        for name in ["v", "u"] {
            if s.eval_cg_closure(&phi, &g(), name).unwrap() == TruthValue::T {
                for k in 0..=2 {
                    let w = s.materialize(name, k).unwrap();
                    assert_ne!(ctx.eval(&Formula::e(g(), phi.clone()), &w).unwrap(), TruthValue::F);
                }
            }
        }
    }
}

#[test]
fn example_three() {
    let u = one_atom();
    let s = SymbolicSystem::default_system(u).unwrap();
    let ex = example3_world(&s, 1).unwrap();
    assert!(matches!(ex.verdict, Verdict::ConditionalTrue { .. }));
    assert_eq!(ex.world, "({p}, All \\ {v', u'}, {v', u'})");
    let counts: Vec<(usize, usize, bool, bool)> =
        ex.evidence.iter().map(|e| (e.level, e.survivors, e.v_member, e.u_member)).collect();
    assert_eq!(counts, vec![(1, 6, true, true), (2, 24, true, true)]);
    let swapped = example3_world(&s, 0).unwrap();
    assert_eq!(swapped.verdict, ex.verdict);
    assert_eq!(swapped.evidence, ex.evidence);
    let no_u = example3_world(&s.without("u").unwrap(), 1).unwrap();
    assert!(matches!(no_u.verdict, Verdict::Unsupported { .. }));
}
