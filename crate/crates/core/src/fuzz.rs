//! Seeded differential testing: solvers against the grounding oracle, and
//! algebraic laws of the operators against the evaluator.
//!
//! Every case draws its own seed from the run seed, so a failure can be
//! replayed from the case seed alone.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{parse_term, Op, Term, Vocabulary};
use crate::error::Result;
use crate::gen::{random_onedim_nf, random_ordered_nf, NfShape, TermGen};
use crate::normalform::{recognize, saturate_universals, NfKind};
use crate::semantics::{evaluate, satisfied, Structure};
use crate::solvers::bounds::polynomial_bound;
use crate::solvers::{oracle_sat, solve_onedim_eq, solve_ordered_eq, OracleOptions, SatVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ordered,
    OneDim,
    Laws,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Ordered, Suite::OneDim, Suite::Laws];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ordered => "ordered",
            Suite::OneDim => "onedim",
            Suite::Laws => "laws",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub suite: Suite,
    pub case: usize,
    pub case_seed: u64,
    pub term: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub schema: u32,
    pub seed: u64,
    pub cases: Vec<(Suite, usize)>,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn render(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for (suite, n) in &self.cases {
            let bad = self.failures.iter().filter(|f| f.suite == *suite).count();
            writeln!(out, "{} cases {n} failures {bad}", suite.name()).expect("string write");
        }
        for f in &self.failures {
            writeln!(out, "FAIL {} case {} seed {}: {} | {}", f.suite.name(), f.case, f.case_seed, f.term, f.detail)
                .expect("string write");
        }
        out
    }
}

/// Per-case seeds derived from the run seed.
pub fn case_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen()).collect()
}

pub fn run_fuzz(seed: u64, count: usize, suites: &[Suite]) -> Result<FuzzReport> {
    let mut report = FuzzReport { schema: 1, seed, cases: vec![], failures: vec![] };
    for &suite in suites {
        for (case, case_seed) in case_seeds(seed ^ suite as u64, count).into_iter().enumerate() {
            if let Some((term, detail)) = run_case(suite, case_seed)? {
                report.failures.push(Failure { suite, case, case_seed, term, detail });
            }
        }
        report.cases.push((suite, count));
    }
    Ok(report)
}

/// Runs one case; returns the term and a description on failure.
pub fn run_case(suite: Suite, case_seed: u64) -> Result<Option<(String, String)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    match suite {
        Suite::Ordered => {
            let (t, _) = random_ordered_nf(&mut rng, NfShape::default());
            let d = ordered_differential(&t)?;
            Ok(d.failure.map(|f| (t.to_string(), f)))
        }
        Suite::OneDim => {
            let (t, _) = random_onedim_nf(&mut rng, NfShape::default());
            let d = onedim_differential(&t)?;
            Ok(d.failure.map(|f| (t.to_string(), f)))
        }
        Suite::Laws => {
            let (t, s, u) = random_law_case(&mut rng);
            let v = law_violations(&mut rng, &t, &u, &s);
            Ok((!v.is_empty()).then(|| (t.to_string(), v.join("; "))))
        }
    }
}

/// Outcome of comparing a decision procedure with the oracle.
#[derive(Clone, Debug)]
pub struct Differential {
    pub solver: SatVerdict,
    pub oracle: SatVerdict,
    /// Size bound the oracle was run to.
    pub bound: usize,
    pub failure: Option<String>,
}

fn compare(t: &Term, solver: SatVerdict, kind: NfKind) -> Result<Differential> {
    let mut nf = recognize(t, kind);
    if kind == NfKind::OneDim {
        nf = nf.map(|nf| saturate_universals(&nf)).transpose()?;
    }
    let bound = nf.map_or(2, |nf| polynomial_bound(nf.kappa.len(), nf.existential.len()));
    let oracle = oracle_sat(t, &OracleOptions::up_to(bound).complete(bound))?;
    let mut failure = None;
    if solver.is_sat() != oracle.is_sat() || solver.is_unsat() != oracle.is_unsat() {
        failure = Some(format!("solver {} oracle {} (bound {bound})", solver.label(), oracle.label()));
    } else if let Some(m) = solver.model() {
        if !satisfied(m, t)? {
            failure = Some("solver model does not satisfy the term".into());
        } else if m.domain() > bound {
            failure = Some(format!("solver model has {} elements, above the bound {bound}", m.domain()));
        }
    }
    Ok(Differential { solver, oracle, bound, failure })
}

/// The ordered solver against the oracle run to the polynomial bound.
pub fn ordered_differential(t: &Term) -> Result<Differential> {
    compare(t, solve_ordered_eq(t)?, NfKind::Ordered)
}

/// The one-dimensional solver against the oracle run to the polynomial bound
/// of the saturated normal form.
pub fn onedim_differential(t: &Term) -> Result<Differential> {
    compare(t, solve_onedim_eq(t)?, NfKind::OneDim)
}

const LAW_VOCABULARIES: [&str; 3] = ["P/1, R/2, T/3", "R/2, T/3", "P/1, Q/1, R/2"];

/// A random term over every operator (with sugar), a structure with at
/// most four elements, and a second term of the same arity.
pub fn random_law_case<G: Rng>(rng: &mut G) -> (Term, Structure, Term) {
    let vocab = Vocabulary::parse(LAW_VOCABULARIES.choose(rng).expect("nonempty")).expect("valid");
    let g = TermGen::new(&vocab, Op::ALL.into_iter().collect()).with_sugar(true);
    loop {
        let depth = rng.gen_range(1..=5);
        let t = g.any_term(rng, depth);
        if let Some(u) = g.term(rng, t.arity(), 3) {
            let n = rng.gen_range(1..=4);
            let density = *[0.2, 0.5, 0.8].choose(rng).expect("nonempty");
            let s = crate::gen::random_structure(rng, &vocab, n, density);
            return (t, s, u);
        }
    }
}

/// Violations of the operator laws by `t` (and `u`, of the same arity) on `s`.
pub fn law_violations<G: Rng>(rng: &mut G, t: &Term, u: &Term, s: &Structure) -> Vec<String> {
    let mut out = Vec::new();
    let v = evaluate(t, s);
    let k = t.arity();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            out.push(name.to_string());
        }
    };
    check("arity", v.arity() == k);
    let mut sigma: Vec<usize> = (0..s.domain()).collect();
    sigma.shuffle(rng);
    check("isomorphism invariance", evaluate(t, &s.permuted(&sigma)) == v.permuted(&sigma));
    check("desugaring", evaluate(&t.desugar(), s) == v);
    check("print/parse", parse_term(&t.to_string(), &s.vocabulary()).is_ok_and(|p| p == *t));
    if k >= 2 {
        check("ss = id", evaluate(&Term::swap(Term::swap(t.clone())), s) == v);
        let e = Term::eq(t.clone());
        check("I = ∃E", evaluate(&Term::subst(t.clone()), s) == evaluate(&Term::ex(e), s));
    }
    if k >= 1 {
        check("p^k = id", evaluate(&Term::repeat(t.clone(), k, Term::cyc), s) == v);
    }
    let e = Term::eq(t.clone());
    check("EE = E", evaluate(&Term::eq(e.clone()), s) == evaluate(&e, s));
    check(
        "⋅∩ = ∩ at equal arity",
        evaluate(&Term::dotcap(t.clone(), u.clone()), s) == evaluate(&Term::cap(t.clone(), u.clone()), s),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let a = run_fuzz(42, 5, &Suite::ALL).unwrap().render();
        let b = run_fuzz(42, 5, &Suite::ALL).unwrap().render();
        assert_eq!(a, b);
        assert!(!a.contains("FAIL"), "{a}");
    }

    #[test]
    fn laws_hold_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (t, s, u) = random_law_case(&mut rng);
            let v = law_violations(&mut rng, &t, &u, &s);
            assert!(v.is_empty(), "{t}: {v:?}");
        }
    }
}
