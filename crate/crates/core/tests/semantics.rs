mod common;

use common::{as_set, brute_force_answer_sets, random_ground_program};
use ddl_core::checker::{is_answer_set, is_closed, reduct};
use ddl_core::{enumerate_answer_sets, EnumerationLimit, GroundProgram, GroundRule, Interpretation, LitId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

fn program(seed: u64, atoms: usize) -> GroundProgram {
    random_ground_program(&mut ChaCha8Rng::seed_from_u64(seed), atoms, 10)
}

fn solve(gp: &GroundProgram) -> Vec<Interpretation> {
    enumerate_answer_sets(gp, EnumerationLimit::ALL).collect()
}

/// Every proper subset of `x` fails to be closed under `rules`, checked
/// by enumeration.
fn minimal_by_enumeration(x: &Interpretation, rules: &[GroundRule]) -> bool {
    let lits = x.as_slice();
    let n = lits.len();
    (0u32..(1 << n) - 1).all(|m| {
        let y: Interpretation = (0..n).filter(|i| m & (1 << i) != 0).map(|i| lits[i]).collect();
        rules.iter().any(|r| {
            r.pos().iter().all(|l| y.contains(*l)) && !r.head().iter().any(|l| y.contains(*l))
        })
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn solver_is_complete_and_sound(seed in any::<u64>()) {
        // up to 7 atoms: at most 14 literals
        let gp = program(seed, 7);
        let found = solve(&gp);
        prop_assert_eq!(found.len(), as_set(found.clone()).len(), "duplicate answer set");
        prop_assert_eq!(as_set(found), brute_force_answer_sets(&gp));
    }

    #[test]
    fn checker_agrees_with_brute_force(seed in any::<u64>()) {
        let gp = program(seed, 6);
        let n = gp.num_literals();
        let expected = brute_force_answer_sets(&gp);
        for m in 0u32..(1 << n) {
            let x: Interpretation = (0..n as u32).filter(|i| m & (1 << i) != 0).map(LitId).collect();
            prop_assert_eq!(is_answer_set(&gp, &x), expected.contains(x.as_slice()));
        }
    }

    #[test]
    fn answer_sets_form_an_antichain(seed in any::<u64>()) {
        let gp = program(seed, 6);
        let found = solve(&gp);
        for (i, x) in found.iter().enumerate() {
            for (j, y) in found.iter().enumerate() {
                prop_assert!(i == j || !x.is_subset(y));
            }
        }
    }

    #[test]
    fn answer_sets_are_models(seed in any::<u64>()) {
        let gp = program(seed, 6);
        for x in solve(&gp) {
            for r in gp.rules() {
                let body = r.pos().iter().all(|l| x.contains(*l))
                    && !r.neg().iter().any(|l| x.contains(*l));
                prop_assert!(!body || r.head().iter().any(|l| x.contains(*l)));
            }
        }
    }

    #[test]
    fn answer_sets_are_minimal_models_of_their_reduct(seed in any::<u64>()) {
        let gp = program(seed, 6);
        for x in solve(&gp) {
            let pp = reduct(&gp, &x);
            prop_assert!(is_closed(&x, &pp));
            prop_assert!(minimal_by_enumeration(&x, pp.rules()));
        }
    }

    #[test]
    fn adding_a_constraint_only_removes_answer_sets(seed in any::<u64>()) {
        let gp = program(seed, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let n = gp.num_literals() as u32;
        let pick = |rng: &mut ChaCha8Rng, k: usize| -> Vec<LitId> {
            (0..k).map(|_| LitId(rng.random_range(0..n))).collect()
        };
        let (np, nn) = (rng.random_range(0..=2), rng.random_range(0..=2));
        let pos = pick(&mut rng, np);
        let neg = pick(&mut rng, nn);
        let mut rules = gp.rules().to_vec();
        rules.push(GroundRule::new(&[], &pos, &neg));
        let extended = GroundProgram::from_parts(gp.symbols().clone(), gp.literals().to_vec(), rules);
        let before = as_set(solve(&gp));
        for x in solve(&extended) {
            prop_assert!(before.contains(x.as_slice()));
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_limit_is_a_prefix(seed in any::<u64>(), k in 1usize..4) {
        let gp = program(seed, 6);
        let all = solve(&gp);
        prop_assert_eq!(&all, &solve(&gp));
        let first: Vec<Interpretation> =
            enumerate_answer_sets(&gp, EnumerationLimit::at_most(k)).collect();
        prop_assert_eq!(first.len(), k.min(all.len()));
        prop_assert_eq!(&first[..], &all[..first.len()]);
    }
}

#[test]
fn small_examples() {
    use ddl_core::ground::verbatim;
    use ddl_core::parser::parse_program;
    let sets = |src: &str| {
        let gp = verbatim(&parse_program(src).unwrap()).unwrap();
        common::rendered(&gp, as_set(solve(&gp)))
    };
    let s = |v: &[&[&str]]| -> std::collections::BTreeSet<Vec<String>> {
        v.iter().map(|x| x.iter().map(|l| l.to_string()).collect()).collect()
    };
    assert_eq!(sets("a v b."), s(&[&["a"], &["b"]]));
    assert_eq!(sets("a. -a."), s(&[]));
    assert_eq!(sets("a :- not a."), s(&[]));
    assert_eq!(sets("a v -a. b :- not a."), s(&[&["a"], &["-a", "b"]]));
}
