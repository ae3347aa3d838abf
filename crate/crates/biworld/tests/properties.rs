use col_biworld::{
    completed_extension, extensions, incompleted_oracle, leq_p, restrict, unique_extension, Biworld, Universe,
    DEFAULT_CAP,
};
use col_syntax::Signature;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn empty_sig() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(Vec::<String>::new(), ["a"]), 3, DEFAULT_CAP).unwrap())
}

fn one_atom() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(["p"], ["a"]), 1, DEFAULT_CAP).unwrap())
}

fn two_agents() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build(&Signature::new(["p"], ["a", "b"]), 1, DEFAULT_CAP).unwrap())
}

fn universes() -> [&'static Universe; 3] {
    [empty_sig(), one_atom(), two_agents()]
}

fn registered(u: &Universe, level: usize, seed: u64) -> Biworld {
    let id = (seed % u.size(level) as u64) as usize;
    u.get(level, id)
}

#[test]
fn completedness_agrees_with_extension_count_exhaustively() {
    for u in universes() {
        for k in 0..u.max_level() {
            for id in 0..u.size(k) {
                let w = u.get(k, id);
                let exts = extensions(u, &w, 2).unwrap();
                assert_eq!(w.is_completed(), exts.len() == 1, "level {k} id {id}");
                assert_eq!(u.is_completed_id(k, id), w.is_completed());
            }
        }
    }
}

#[test]
fn completedness_at_top_level_via_odometer() {
    for u in universes() {
        let k = u.max_level();
        for id in 0..u.size(k) {
            let w = u.get(k, id);
            assert_eq!(!w.is_completed(), incompleted_oracle(u, &w).unwrap());
        }
    }
}

#[test]
fn odometer_matches_registry_fibers() {
    // build a smaller universe so the odometer runs where the registry is known
    let sig = Signature::new(Vec::<String>::new(), ["a"]);
    let low = Universe::build(&sig, 2, DEFAULT_CAP).unwrap();
    let high = empty_sig();
    for id in 0..low.size(2) {
        let w = low.get(2, id);
        let mut got: Vec<Option<usize>> = extensions(&low, &w, usize::MAX).unwrap().iter().map(|e| high.lookup(e)).collect();
        got.sort();
        let want: Vec<Option<usize>> = high.fiber(3, id).map(Some).collect();
        assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn restriction_is_registered(seed in any::<u64>(), which in 0usize..3, level in 1usize..=2) {
        let u = universes()[which];
        let level = level.min(u.max_level());
        let w = registered(u, level, seed);
        for alpha in 0..=level {
            let r = restrict(u, &w, alpha).unwrap();
            prop_assert!(u.contains(&r));
            prop_assert!(leq_p(u, &r, &w));
        }
    }

    #[test]
    fn random_biworlds_restrict_into_registry(seed in any::<u64>(), which in 0usize..3) {
        let u = universes()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = u.random_biworld(u.max_level() + 1, &mut rng).unwrap();
        u.validate(&w).unwrap();
        let r = restrict(u, &w, u.max_level()).unwrap();
        prop_assert!(u.contains(&r));
    }

    #[test]
    fn precision_is_a_partial_order(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let u = empty_sig();
        let pick = |s: u64| registered(u, (s % 4) as usize, s >> 2);
        let (x, y, z) = (pick(a), pick(b), pick(c));
        prop_assert!(leq_p(u, &x, &x));
        if leq_p(u, &x, &y) && leq_p(u, &y, &x) {
            prop_assert_eq!(&x, &y);
        }
        if leq_p(u, &x, &y) && leq_p(u, &y, &z) {
            prop_assert!(leq_p(u, &x, &z));
        }
    }

    #[test]
    fn every_extension_is_above(seed in any::<u64>(), which in 0usize..3) {
        let u = universes()[which];
        let k = (seed % (u.max_level() as u64 + 1)) as usize;
        let w = registered(u, k, seed >> 3);
        for e in extensions(u, &w, 50).unwrap() {
            prop_assert!(leq_p(u, &w, &e));
            u.validate(&e).unwrap();
        }
    }

    #[test]
    fn completed_extension_is_completed_and_above(seed in any::<u64>(), which in 0usize..3) {
        let u = universes()[which];
        let k = (seed % (u.max_level() as u64 + 1)) as usize;
        let w = registered(u, k, seed >> 3);
        let c = completed_extension(u, &w).unwrap();
        prop_assert!(c.is_completed());
        u.validate(&c).unwrap();
        prop_assert!(leq_p(u, &w, &c));
    }

    #[test]
    fn completed_biworlds_extend_uniquely(seed in any::<u64>(), which in 0usize..3) {
        let u = universes()[which];
        let k = 1 + (seed % u.max_level() as u64) as usize;
        let w = registered(u, k, seed >> 3);
        if w.is_completed() {
            let exts = extensions(u, &w, 3).unwrap();
            prop_assert_eq!(exts.len(), 1);
            let up = unique_extension(u, &w).unwrap();
            prop_assert_eq!(&exts[0], &up);
            prop_assert!(up.is_completed());
        }
    }
}
