use ofl::normalform::{recognize, saturate_universals, to_normal_form, NfKind};
use ofl::solvers::bounds::polynomial_bound;
use ofl::solvers::{
    brute_force_sat, check_no_finite_model_upto, oracle_sat, size_bound, solve_onedim_eq, solve_ordered_eq,
    OracleOptions, SatStatus,
};
use ofl::{operators_used, parse_term, satisfied, Term, Vocabulary};

fn term(vocab: &str, src: &str) -> Term {
    parse_term(src, &Vocabulary::parse(vocab).unwrap()).unwrap()
}

#[test]
fn contradiction_needs_a_complete_bound_for_unsat() {
    let t = term("R/2", "ex ex (R cap not R)");
    assert_eq!(brute_force_sat(&t, 3).unwrap().status, SatStatus::Unknown);
    assert!(oracle_sat(&t, &OracleOptions::up_to(3).complete(3)).unwrap().is_unsat());
    assert!(solve_ordered_eq(&t).unwrap().is_unsat());
}

#[test]
fn unary_existential_has_a_one_element_model() {
    let t = term("P/1", "ex P");
    let v = brute_force_sat(&t, 1).unwrap();
    let m = v.model().unwrap();
    assert_eq!(m.domain(), 1);
    assert!(m.get("P").unwrap().contains(&[0]));
    assert!(!check_no_finite_model_upto(&t, 1).unwrap());
}

#[test]
fn non_self_successor_needs_two_elements() {
    let t = term("R/2", "all ex (R cap not E (R cup not R))");
    let v = brute_force_sat(&t, 2).unwrap();
    let m = v.model().unwrap();
    assert_eq!(m.domain(), 2);
    assert_eq!(m.get("R").unwrap().tuples(), vec![vec![0, 1], vec![1, 0]]);

    let v = solve_ordered_eq(&t).unwrap();
    let m = v.model().unwrap();
    assert!(satisfied(m, &t).unwrap());
    let ops = operators_used(&t.desugar());
    let v = t.vocabulary();
    let bound = to_normal_form(&t, &v).unwrap().iter().map(|nf| size_bound(nf, ops).unwrap()).max().unwrap();
    assert!(m.domain() <= bound);
}

#[test]
fn bound_values() {
    assert_eq!(polynomial_bound(2, 3), 12);
    assert_eq!(polynomial_bound(0, 0), 2);
    assert_eq!(polynomial_bound(1, 2), 4);
}

#[test]
fn onedim_examples() {
    let t = term("P/1, R/2", "ex0 P cap all0 not P");
    assert!(solve_onedim_eq(&t).unwrap().is_unsat());

    let t = term("P/1, R/2", "ex0 P cap all0 (not P cup ex1 R)");
    let v = solve_onedim_eq(&t).unwrap();
    let m = v.model().unwrap();
    assert!(m.domain() <= 2);
    assert!(satisfied(m, &t).unwrap());
    let nf = saturate_universals(&recognize(&t, NfKind::OneDim).unwrap()).unwrap();
    let bound = polynomial_bound(nf.kappa.len(), nf.existential.len());
    assert!(oracle_sat(&t, &OracleOptions::up_to(bound)).unwrap().is_sat());
}

#[test]
fn timeouts_yield_unknown() {
    let t = term("R/2, T/3", "all ex (R cap not E (R cup not R)) cap all all ex T");
    let v = oracle_sat(&t, &OracleOptions::up_to(6).timeout(Some(std::time::Duration::ZERO))).unwrap();
    assert_eq!(v.status, SatStatus::Unknown);
}
