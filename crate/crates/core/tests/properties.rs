use ofl::fuzz::{law_violations, random_law_case};
use ofl::gen::{random_onedim_nf, random_ordered_nf, random_structure, small_vocabularies, NfShape, TermGen};
use ofl::normalform::{kind_for, to_normal_form};
use ofl::semantics::{eval_fo, term_to_fo};
use ofl::solvers::{count_models, oracle_sat, sat_at_size, solve_onedim_eq, solve_ordered_eq, OracleOptions};
use ofl::{evaluate, parse_term, satisfied, ADRelation, Op, OpSet, Structure, Term, Vocabulary};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn all_ops() -> OpSet {
    Op::ALL.into_iter().collect()
}

/// Every structure of size `n` over `vocab`, by enumerating fact sets.
fn all_structures(vocab: &Vocabulary, n: usize) -> Vec<Structure> {
    let sizes: Vec<(String, usize, usize)> =
        vocab.iter().map(|(name, a)| (name.to_string(), a, n.pow(a as u32))).collect();
    let facts: usize = sizes.iter().map(|s| s.2).sum();
    (0u64..1 << facts)
        .map(|mask| {
            let mut s = Structure::new(n, vocab);
            let mut offset = 0;
            for (name, a, size) in &sizes {
                let rel = ADRelation::from_fn(n, *a, |i| mask >> (offset + i) & 1 == 1);
                s.set(name, rel);
                offset += size;
            }
            s
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::parse("P/1, R/2, T/3").unwrap();
        let g = TermGen::new(&v, all_ops()).with_sugar(true);
        let depth = rng.gen_range(1..=6);
        let t = g.any_term(&mut rng, depth);
        prop_assert_eq!(parse_term(&t.to_string(), &v).unwrap(), t);
    }

    #[test]
    fn operator_laws_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, s, u) = random_law_case(&mut rng);
        let bad = law_violations(&mut rng, &t, &u, &s);
        prop_assert!(bad.is_empty(), "{}: {:?}", t, bad);
    }

    #[test]
    fn terms_agree_with_their_formulas(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let g = TermGen::new(&v, all_ops());
        let t = g.any_term(&mut rng, 4);
        let n = rng.gen_range(1..=3);
        let s = random_structure(&mut rng, &v, n, 0.5);
        let rel = evaluate(&t, &s);
        let f = term_to_fo(&t);
        for i in 0..rel.capacity() {
            let tuple = rel.tuple_at(i);
            let env: BTreeMap<usize, usize> = tuple.iter().enumerate().map(|(j, &x)| (j + 1, x)).collect();
            prop_assert_eq!(rel.get_index(i), eval_fo(&f, &s, &env).unwrap(), "{} at {:?}", t, tuple);
        }
    }

    #[test]
    fn structures_round_trip_through_json(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::parse("P/1, R/2, T/3").unwrap();
        let n = rng.gen_range(1..=4);
        let s = random_structure(&mut rng, &v, n, 0.4);
        prop_assert_eq!(Structure::from_json(&s.to_json(), Some(&v)).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ordered_models_satisfy_the_input(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, _) = random_ordered_nf(&mut rng, NfShape::default());
        let verdict = solve_ordered_eq(&t).unwrap();
        if let Some(m) = verdict.model() {
            prop_assert!(satisfied(m, &t).unwrap());
        }
        if verdict.is_unsat() {
            prop_assert!(!oracle_sat(&t, &OracleOptions::up_to(3)).unwrap().is_sat());
        }
    }

    #[test]
    fn onedim_models_satisfy_the_input(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, _) = random_onedim_nf(&mut rng, NfShape::default());
        let verdict = solve_onedim_eq(&t).unwrap();
        if let Some(m) = verdict.model() {
            prop_assert!(satisfied(m, &t).unwrap());
        }
        if verdict.is_unsat() {
            prop_assert!(!oracle_sat(&t, &OracleOptions::up_to(3)).unwrap().is_sat());
        }
    }

    #[test]
    fn normal_forms_are_equisatisfiable_per_size(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocabs = small_vocabularies();
        let v = &vocabs[rng.gen_range(0..vocabs.len())];
        let ops = OpSet::of(&[Op::Eq, Op::Neg, Op::Cap, Op::Exists]);
        let Some(t) = TermGen::new(v, ops).term(&mut rng, 0, 4) else { return Ok(()) };
        prop_assume!(kind_for(&t).is_ok());
        let branches = to_normal_form(&t, v).unwrap();
        for n in 1..=2 {
            let nf_sat = branches.iter().any(|nf| sat_at_size(&nf.to_term(), n).unwrap());
            prop_assert_eq!(sat_at_size(&t, n).unwrap(), nf_sat, "{} at size {}", t, n);
        }
    }

    #[test]
    fn grounding_counts_match_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let g = TermGen::new(&v, all_ops());
        let Some(t) = g.term(&mut rng, 0, 4) else { return Ok(()) };
        for n in 1..=2 {
            let naive = all_structures(&v, n).iter().filter(|s| satisfied(s, &t).unwrap()).count() as u64;
            prop_assert_eq!(count_models(&t, &v, n).unwrap(), naive, "{} at size {}", t, n);
        }
    }

    #[test]
    fn oracle_reruns_are_identical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let Some(t) = TermGen::new(&v, all_ops()).term(&mut rng, 0, 4) else { return Ok(()) };
        let a = oracle_sat(&t, &OracleOptions::up_to(2)).unwrap();
        let b = oracle_sat(&t, &OracleOptions::up_to(2)).unwrap();
        prop_assert_eq!(a.status, b.status);
    }
}

#[test]
fn top_and_bottom_sentences() {
    let s = Structure::new(1, &Vocabulary::new());
    assert!(satisfied(&s, &Term::Top).unwrap());
    assert!(!satisfied(&s, &Term::Bot).unwrap());
}
