//! Bounded finite-model search by grounding.

use std::time::{Duration, Instant};

use super::cdcl::SolveResult;
use super::ground::Grounding;
use super::{SatStatus, SatVerdict, SolveStats};
use crate::algebra::{Term, Vocabulary};
use crate::error::{Error, Result};
use crate::semantics::satisfied;

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub min_size: usize,
    pub max_size: usize,
    /// A size known to suffice for every satisfiable input; exhausting it yields UNSAT.
    pub complete_bound: Option<usize>,
    pub timeout: Option<Duration>,
    /// Extra symbols to interpret in the returned model.
    pub vocab: Vocabulary,
}

impl OracleOptions {
    pub fn up_to(max_size: usize) -> Self {
        OracleOptions {
            min_size: 1,
            max_size,
            complete_bound: None,
            timeout: None,
            vocab: Vocabulary::new(),
        }
    }

    pub fn complete(mut self, bound: usize) -> Self {
        self.complete_bound = Some(bound);
        self
    }

    pub fn timeout(mut self, t: Option<Duration>) -> Self {
        self.timeout = t;
        self
    }

    pub fn vocab(mut self, v: &Vocabulary) -> Self {
        self.vocab = v.clone();
        self
    }
}

/// Searches for a model of each size in `min_size..=max_size`.
pub fn oracle_sat(term: &Term, opts: &OracleOptions) -> Result<SatVerdict> {
    if term.arity() != 0 {
        return Err(Error::NotSentence(term.arity()));
    }
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let mut stats = SolveStats::default();
    let mut timed_out = false;
    for n in opts.min_size.max(1)..=opts.max_size {
        stats.max_size_tried = n;
        let mut g = Grounding::new(term, &opts.vocab, n);
        let r = g.solve(deadline);
        stats.branches += g.stats().decisions;
        match r {
            SolveResult::Sat => {
                let model = g.model();
                if !satisfied(&model, term)? {
                    return Err(Error::Internal(format!(
                        "grounding produced a non-model at size {n}"
                    )));
                }
                stats.elapsed = start.elapsed();
                return Ok(SatVerdict { status: SatStatus::Sat(model), stats, trace: vec![] });
            }
            SolveResult::Unsat => {}
            SolveResult::Unknown => {
                timed_out = true;
                break;
            }
        }
    }
    stats.elapsed = start.elapsed();
    let complete = opts.complete_bound.is_some_and(|b| opts.max_size >= b) && opts.min_size <= 1;
    let status = if !timed_out && complete { SatStatus::Unsat } else { SatStatus::Unknown };
    Ok(SatVerdict { status, stats, trace: vec![] })
}

/// Model search over sizes `1..=max_size`; UNKNOWN when none is found.
pub fn brute_force_sat(term: &Term, max_size: usize) -> Result<SatVerdict> {
    oracle_sat(term, &OracleOptions::up_to(max_size))
}

/// Whether some model of size exactly `n` exists.
pub fn sat_at_size(term: &Term, n: usize) -> Result<bool> {
    if term.arity() != 0 {
        return Err(Error::NotSentence(term.arity()));
    }
    Ok(Grounding::new(term, &Vocabulary::new(), n).solve(None) == SolveResult::Sat)
}

/// True iff the term has no model of any size up to `n`.
pub fn check_no_finite_model_upto(term: &Term, n: usize) -> Result<bool> {
    Ok(!brute_force_sat(term, n)?.is_sat())
}

/// Number of structures over `vocab` (plus the term's symbols) with domain
/// `0..n` that satisfy the sentence.
pub fn count_models(term: &Term, vocab: &Vocabulary, n: usize) -> Result<u64> {
    if term.arity() != 0 {
        return Err(Error::NotSentence(term.arity()));
    }
    let mut g = Grounding::new(term, vocab, n);
    let mut count = 0;
    while g.solve(None) == SolveResult::Sat {
        count += 1;
        if !g.block_model() {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_term;

    fn term(src: &str, vocab: &str) -> Term {
        parse_term(src, &Vocabulary::parse(vocab).unwrap()).unwrap()
    }

    #[test]
    fn contradiction_has_no_model() {
        let t = term("ex ex (R cap not R)", "R/2");
        assert_eq!(brute_force_sat(&t, 3).unwrap().status, SatStatus::Unknown);
        let v = oracle_sat(&t, &OracleOptions::up_to(3).complete(3)).unwrap();
        assert_eq!(v.status, SatStatus::Unsat);
    }

    #[test]
    fn unary_existential_has_singleton_model() {
        let v = brute_force_sat(&term("ex P", "P/1"), 3).unwrap();
        let m = v.model().unwrap();
        assert_eq!(m.domain(), 1);
        assert_eq!(m.get("P").unwrap().tuples(), vec![vec![0]]);
    }

    #[test]
    fn irreflexive_successor_needs_two_elements() {
        let t = term("all ex (R cap not E (R cup not R))", "R/2");
        let v = brute_force_sat(&t, 2).unwrap();
        let m = v.model().unwrap();
        assert_eq!(m.domain(), 2);
        assert_eq!(m.get("R").unwrap().tuples(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn positive_arity_is_rejected() {
        assert!(brute_force_sat(&term("R", "R/2"), 2).is_err());
    }
}
