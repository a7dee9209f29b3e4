use std::collections::hash_map::Entry;
use std::collections::HashMap;

use ofl::gen::random_structure;
use ofl::tables::similar;
use ofl::{evaluate, ADRelation, Op, OpSet, Structure, Term, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Behaviour = (ADRelation, ADRelation);

/// Every pair (value on `sa`, value on `sb`) of a quantifier-free GRA(F) term
/// of arity at most `max_arity`, found by closing the symbols under F.
fn behaviours(sa: &Structure, sb: &Structure, f: OpSet, max_arity: usize) -> Vec<Behaviour> {
    let mut seen: HashMap<Behaviour, Term> = HashMap::new();
    let mut frontier: Vec<Term> = sa.vocabulary().iter().map(|(n, a)| Term::rel(n, a)).collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for t in frontier {
            if t.arity() > max_arity {
                continue;
            }
            let key = (evaluate(&t, sa), evaluate(&t, sb));
            if let Entry::Vacant(e) = seen.entry(key) {
                e.insert(t.clone());
                fresh.push(t);
            }
        }
        let known: Vec<Term> = seen.values().cloned().collect();
        let mut next = Vec::new();
        for t in &fresh {
            let unary = [(Op::Neg, Term::not as fn(Term) -> Term), (Op::Swap, Term::swap), (Op::Subst, Term::subst), (Op::Eq, Term::eq)];
            for (op, build) in unary {
                if f.contains(op) {
                    next.push(build(t.clone()));
                }
            }
            let binary = [(Op::Cap, Term::cap as fn(Term, Term) -> Term), (Op::DotCap, Term::dotcap), (Op::OneDimCap, Term::onedim)];
            for (op, build) in binary {
                if f.contains(op) {
                    for u in &known {
                        next.push(build(t.clone(), u.clone()));
                        next.push(build(u.clone(), t.clone()));
                    }
                }
            }
        }
        frontier = next;
    }
    seen.into_keys().collect()
}

fn agree_everywhere(bs: &[Behaviour], a: &[usize], b: &[usize]) -> bool {
    bs.iter().filter(|(ra, _)| ra.arity() == a.len()).all(|(ra, rb)| ra.contains(a) == rb.contains(b))
}

#[test]
fn similarity_matches_term_closure() {
    let v = Vocabulary::parse("P/1, R/2").unwrap();
    let boolean = [Op::Neg, Op::Cap];
    let sets = [
        OpSet::EMPTY,
        OpSet::of(&[Op::Swap]),
        OpSet::of(&[Op::Subst, Op::Swap]),
        OpSet::of(&boolean),
        OpSet::of(&boolean).with(Op::Swap),
        OpSet::of(&boolean).with(Op::Eq),
        OpSet::of(&boolean).with(Op::OneDimCap),
        OpSet::of(&boolean).with(Op::DotCap),
        OpSet::of(&boolean).with(Op::Swap).with(Op::Eq).with(Op::Subst),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut split = [0usize; 2];
    for f in sets {
        for _ in 0..12 {
            let (na, nb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let sa = random_structure(&mut rng, &v, na, 0.5);
            let sb = random_structure(&mut rng, &v, nb, 0.5);
            let bs = behaviours(&sa, &sb, f, 2);
            for k in 1..=2 {
                let a: Vec<usize> = (0..k).map(|_| rng.gen_range(0..sa.domain())).collect();
                let b: Vec<usize> = (0..k).map(|_| rng.gen_range(0..sb.domain())).collect();
                let expected = agree_everywhere(&bs, &a, &b);
                assert_eq!(similar(&sa, &a, &sb, &b, f).unwrap(), expected, "F={f} a={a:?} b={b:?}");
                split[expected as usize] += 1;
            }
        }
    }
    assert!(split[0] > 10 && split[1] > 10, "{split:?}");
}
