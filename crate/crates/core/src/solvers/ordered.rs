//! Decision procedure for GRA(I,E,¬,∩,∃).
//!
//! The input is brought to ordered normal form and searched depth-first over
//! tuple views. A tuple's fresh extensions `ā·c` with `c ≠ a_k` are
//! interchangeable, so the guesses at a tuple are: which requirements get a
//! dedicated witness, the table of each witness extension, and one table for
//! the remaining extensions. Feasibility of a view is memoized, which turns the
//! backtracking over identical subtrees into a table lookup.

use std::collections::HashMap;
use std::time::Instant;

use super::bounds::polynomial_bound;
use super::qf::{Qf, SymbolIndex};
use super::{SatStatus, SatVerdict, SolveStats, SolverOptions};
use crate::algebra::{operators_used, Op, OpSet, Term};
use crate::error::{Error, Result};
use crate::normalform::{to_normal_form_with, witness_distinctness_rewrite, NfKind, NfOptions, NormalForm};
use crate::semantics::{satisfied, Structure};

pub const FRAGMENT: OpSet = OpSet::of(&[Op::Subst, Op::Eq, Op::Neg, Op::Cap, Op::Exists]);

/// Largest number of table bits enumerated at one level.
const MAX_TABLE_BITS: u32 = 20;

struct Req {
    n: usize,
    alpha: Qf,
    beta: Qf,
}

struct Problem {
    index: SymbolIndex,
    kappa: Vec<Qf>,
    lambda: Vec<Qf>,
    existential: Vec<Req>,
    universal: Vec<Req>,
    /// Deepest guard arity; views longer than this carry no constraints.
    depth: usize,
    /// `masks[k]`: symbols of arity at least `k`.
    masks: Vec<u64>,
}

impl Problem {
    fn new(nf: &NormalForm) -> Result<Problem> {
        let index = SymbolIndex::new(&nf.vocab)?;
        let compile = |t: &Term| Qf::compile(t, &index);
        let reqs = |rs: &[crate::normalform::Requirement]| -> Result<Vec<Req>> {
            rs.iter()
                .map(|r| Ok(Req { n: r.n, alpha: compile(&r.alpha)?, beta: compile(&r.beta)? }))
                .collect()
        };
        let existential = reqs(&nf.existential)?;
        let universal = reqs(&nf.universal)?;
        let depth = existential.iter().chain(&universal).map(|r| r.n).max().unwrap_or(0);
        let top = depth.max(nf.vocab.max_arity()) + 2;
        let masks = (0..top).map(|k| index.mask(|a| a >= k)).collect();
        Ok(Problem {
            kappa: nf.kappa.iter().map(compile).collect::<Result<_>>()?,
            lambda: nf.lambda.iter().map(compile).collect::<Result<_>>()?,
            existential,
            universal,
            depth,
            masks,
            index,
        })
    }

    /// All tables over the symbols of arity at least `k`, in lexicographic bit order.
    fn tables(&self, k: usize) -> Result<impl Iterator<Item = u64>> {
        let mask = self.masks[k];
        let bits: Vec<u32> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        if bits.len() as u32 > MAX_TABLE_BITS {
            return Err(Error::Input(format!("{} symbols of arity ≥ {k} exceed the table limit", bits.len())));
        }
        Ok((0u64..1 << bits.len()).map(move |x| {
            bits.iter().enumerate().fold(0, |t, (j, &b)| t | (x >> j & 1) << b)
        }))
    }
}

/// Extension tables chosen at one view.
#[derive(Clone, Debug, Default)]
struct Plan {
    /// Tables of the dedicated witness extensions, in element order.
    witnesses: Vec<u64>,
    /// `(requirement, witness slot)` pairs, for the trace.
    assigned: Vec<(usize, usize)>,
    /// Table of every other extension.
    filler: Option<u64>,
}

type Key = (usize, bool, u64);

struct Timeout;

struct Search<'a> {
    p: &'a Problem,
    size: usize,
    memo: HashMap<Key, Option<Plan>>,
    deadline: Option<Instant>,
    branches: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> std::result::Result<(), Timeout> {
        self.branches += 1;
        if self.branches.is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Timeout);
        }
        Ok(())
    }

    /// Extension tables at the root (the 1-types) or below a view of length `k`.
    fn candidates(&mut self, k: usize, universal: &[&Qf]) -> Result<std::result::Result<Vec<u64>, Timeout>> {
        let mut out = Vec::new();
        for t in self.p.tables(k + 1)? {
            if !universal.iter().all(|q| q.eval(false, t)) {
                continue;
            }
            match self.feasible(k + 1, false, t)? {
                Err(to) => return Ok(Err(to)),
                Ok(true) => out.push(t),
                Ok(false) => {}
            }
        }
        Ok(Ok(out))
    }

    fn feasible(&mut self, k: usize, eq: bool, bits: u64) -> Result<std::result::Result<bool, Timeout>> {
        if k > self.p.depth {
            return Ok(Ok(true));
        }
        let key = (k, eq, bits);
        if let Some(plan) = self.memo.get(&key) {
            return Ok(Ok(plan.is_some()));
        }
        if let Err(to) = self.tick() {
            return Ok(Err(to));
        }
        let plan = match self.plan(k, eq, bits)? {
            Ok(plan) => plan,
            Err(to) => return Ok(Err(to)),
        };
        let ok = plan.is_some();
        self.memo.insert(key, plan);
        Ok(Ok(ok))
    }

    fn plan(&mut self, k: usize, eq: bool, bits: u64) -> Result<std::result::Result<Option<Plan>, Timeout>> {
        let p = self.p;
        let (pending, universal): (Vec<(usize, &Qf)>, Vec<&Qf>) = if k == 0 {
            (p.kappa.iter().enumerate().collect(), p.lambda.iter().collect())
        } else {
            let self_bits = bits & p.masks[k + 1];
            let mut pending = Vec::new();
            for (i, r) in p.existential.iter().enumerate() {
                if r.n == k && r.alpha.eval(eq, bits) && !r.beta.eval(true, self_bits) {
                    pending.push((i, &r.beta));
                }
            }
            let mut universal = Vec::new();
            for r in &p.universal {
                if r.n == k && r.alpha.eval(eq, bits) {
                    if !r.beta.eval(true, self_bits) {
                        return Ok(Ok(None));
                    }
                    universal.push(&r.beta);
                }
            }
            match self.feasible(k + 1, true, self_bits)? {
                Err(to) => return Ok(Err(to)),
                Ok(false) => return Ok(Ok(None)),
                Ok(true) => {}
            }
            (pending, universal)
        };
        let slots = if k == 0 { self.size } else { self.size - 1 };
        if slots == 0 {
            return Ok(Ok(pending.is_empty().then(Plan::default)));
        }
        let cands = match self.candidates(k, &universal)? {
            Ok(c) => c,
            Err(to) => return Ok(Err(to)),
        };
        let Some(&filler) = cands.first() else { return Ok(Ok(None)) };
        let mut plan = Plan { filler: Some(filler), ..Plan::default() };
        Ok(Ok(cover(&pending, &cands, slots, &mut plan).then_some(plan)))
    }
}

/// Assigns each pending requirement a witness slot whose table satisfies its
/// body, opening at most `slots` slots. Existing slots are tried before new ones.
fn cover(pending: &[(usize, &Qf)], cands: &[u64], slots: usize, plan: &mut Plan) -> bool {
    let Some(&(req, beta)) = pending.first() else { return true };
    for slot in 0..plan.witnesses.len() {
        if beta.eval(false, plan.witnesses[slot]) {
            plan.assigned.push((req, slot));
            if cover(&pending[1..], cands, slots, plan) {
                return true;
            }
            plan.assigned.pop();
        }
    }
    if plan.witnesses.len() < slots {
        for &t in cands {
            if plan.witnesses.contains(&t) || !beta.eval(false, t) {
                continue;
            }
            plan.witnesses.push(t);
            plan.assigned.push((req, plan.witnesses.len() - 1));
            if cover(&pending[1..], cands, slots, plan) {
                return true;
            }
            plan.assigned.pop();
            plan.witnesses.pop();
        }
    }
    false
}

struct Builder<'a> {
    p: &'a Problem,
    memo: &'a HashMap<Key, Option<Plan>>,
    size: usize,
    model: Structure,
    trace: Option<Vec<String>>,
}

fn fmt_tuple(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl Builder<'_> {
    fn set_facts(&mut self, tuple: &[usize], bits: u64) {
        let k = tuple.len();
        let last = tuple[k - 1];
        for (i, name, a) in self.p.index.iter() {
            if a >= k && bits >> i & 1 == 1 {
                let mut t = tuple.to_vec();
                t.resize(a, last);
                let name = name.to_string();
                self.model.get_mut(&name).expect("declared symbol").insert(&t);
            }
        }
    }

    fn log(&mut self, line: impl FnOnce() -> String) {
        if let Some(t) = &mut self.trace {
            t.push(line());
        }
    }

    fn build(&mut self, tuple: &mut Vec<usize>, eq: bool, bits: u64) {
        let k = tuple.len();
        if k > self.p.depth {
            return;
        }
        let plan = self.memo[&(k, eq, bits)].clone().expect("feasible view");
        let children: Vec<usize> = match tuple.last() {
            Some(&last) => (0..self.size).filter(|&c| c != last).collect(),
            None => (0..self.size).collect(),
        };
        for &(req, slot) in &plan.assigned {
            let (kind, c) = (if k == 0 { "kappa" } else { "witness" }, children[slot]);
            self.log(|| format!("guess {kind} {} {req} {c}", fmt_tuple(tuple)));
        }
        if k > 0 {
            let self_bits = bits & self.p.masks[k + 1];
            let last = tuple[k - 1];
            tuple.push(last);
            self.build(tuple, true, self_bits);
            tuple.pop();
        }
        for (slot, &c) in children.iter().enumerate() {
            let t = plan.witnesses.get(slot).copied().or(plan.filler).expect("extension table");
            tuple.push(c);
            let kind = if k == 0 { "type" } else { "table" };
            self.log(|| format!("guess {kind} {} {t:b}", fmt_tuple(tuple)));
            self.set_facts(tuple, t);
            self.build(tuple, false, t);
            tuple.pop();
        }
    }
}

/// Searches one normal form at domain size `size`.
fn search(
    p: &Problem,
    nf: &NormalForm,
    size: usize,
    opts: &SolverOptions,
    deadline: Option<Instant>,
    stats: &mut SolveStats,
) -> Result<std::result::Result<Option<(Structure, Vec<String>)>, Timeout>> {
    let mut s = Search { p, size, memo: HashMap::new(), deadline, branches: 0 };
    let r = s.feasible(0, false, 0)?;
    stats.branches += s.branches;
    match r {
        Err(to) => Ok(Err(to)),
        Ok(false) => Ok(Ok(None)),
        Ok(true) => {
            let mut b = Builder {
                p,
                memo: &s.memo,
                size,
                model: Structure::new(size, &nf.vocab),
                trace: opts.trace.then(Vec::new),
            };
            b.build(&mut Vec::new(), false, 0);
            Ok(Ok(Some((b.model, b.trace.unwrap_or_default()))))
        }
    }
}

/// Decides satisfiability of a sentence of GRA(I,E,¬,∩,∃).
pub fn solve_ordered_eq(term: &Term) -> Result<SatVerdict> {
    solve_ordered_eq_with(term, &SolverOptions::default())
}

pub fn solve_ordered_eq_with(term: &Term, opts: &SolverOptions) -> Result<SatVerdict> {
    if term.arity() != 0 {
        return Err(Error::NotSentence(term.arity()));
    }
    let ops = operators_used(term);
    if !ops.is_subset(FRAGMENT) {
        return Err(Error::Fragment { found: ops.to_string(), expected: FRAGMENT.to_string() });
    }
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let input_vocab = term.vocabulary();
    let mut stats = SolveStats::default();
    let nf_opts = NfOptions { kind: Some(NfKind::Ordered), ..NfOptions::default() };
    let branches = to_normal_form_with(term, &input_vocab, nf_opts)?;
    let many = branches.len() > 1;
    for (bi, nf) in branches.iter().enumerate() {
        let nf = witness_distinctness_rewrite(nf)?;
        let problem = Problem::new(&nf)?;
        let bound = polynomial_bound(nf.kappa.len(), nf.existential.len());
        for size in [1, bound] {
            stats.max_size_tried = stats.max_size_tried.max(size);
            match search(&problem, &nf, size, opts, deadline, &mut stats)? {
                Err(Timeout) => {
                    stats.elapsed = start.elapsed();
                    return Ok(SatVerdict { status: SatStatus::Unknown, stats, trace: vec![] });
                }
                Ok(None) => {}
                Ok(Some((model, mut trace))) => {
                    let decoded = nf
                        .decode(&model, &input_vocab)
                        .ok_or_else(|| Error::Internal("normal-form model does not decode".into()))?;
                    if !satisfied(&decoded, term)? {
                        return Err(Error::Internal(format!("constructed structure does not satisfy {term}")));
                    }
                    if many {
                        trace.insert(0, format!("guess branch {bi}"));
                    }
                    trace.insert(0, format!("guess size {size}"));
                    stats.elapsed = start.elapsed();
                    return Ok(SatVerdict { status: SatStatus::Sat(decoded), stats, trace });
                }
            }
        }
    }
    stats.elapsed = start.elapsed();
    Ok(SatVerdict { status: SatStatus::Unsat, stats, trace: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_term, Vocabulary};

    fn verdict(src: &str, vocab: &str) -> SatVerdict {
        let v = Vocabulary::parse(vocab).unwrap();
        solve_ordered_eq(&parse_term(src, &v).unwrap()).unwrap()
    }

    #[test]
    fn contradiction_is_unsat() {
        assert!(verdict("ex ex (R cap not R)", "R/2").is_unsat());
    }

    #[test]
    fn non_loop_successor() {
        let v = verdict("all ex (R cap not E (R cup not R))", "R/2");
        let m = v.model().unwrap();
        assert!(m.domain() >= 2 && m.domain() <= 2);
    }

    #[test]
    fn size_one_models_are_tried_first() {
        assert_eq!(verdict("ex P", "P/1").model().unwrap().domain(), 1);
    }

    #[test]
    fn equality_forces_one_element() {
        let v = verdict("all all E (R cup not R) cap ex P cap ex not P", "P/1, R/2");
        assert!(v.is_unsat());
    }

    #[test]
    fn rejects_other_fragments() {
        let v = Vocabulary::parse("R/2").unwrap();
        assert!(solve_ordered_eq(&parse_term("ex ex s R", &v).unwrap()).is_err());
    }

    #[test]
    fn trace_records_guesses() {
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let t = parse_term("ex P cap all (not P cup ex (R cap not E (R cup not R)))", &v).unwrap();
        let r = solve_ordered_eq_with(&t, &SolverOptions { trace: true, ..Default::default() }).unwrap();
        assert!(r.is_sat());
        assert!(r.trace.iter().all(|l| l.starts_with("guess ")));
        assert!(r.trace.iter().any(|l| l.starts_with("guess witness")));
    }

    #[test]
    fn agrees_with_oracle_on_random_normal_forms() {
        use crate::gen::{random_ordered_nf, NfShape};
        use crate::normalform::{recognize, NfKind};
        use crate::solvers::oracle::brute_force_sat;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let (t, _) = random_ordered_nf(&mut rng, NfShape::default());
            let nf = recognize(&t, NfKind::Ordered).unwrap();
            let bound = polynomial_bound(nf.kappa.len(), nf.existential.len());
            let ours = solve_ordered_eq(&t).unwrap();
            let oracle = brute_force_sat(&t, bound.min(4)).unwrap();
            if oracle.is_sat() {
                assert!(ours.is_sat(), "{t}");
            }
            if let Some(m) = ours.model() {
                assert!(m.domain() <= bound);
                assert!(satisfied(m, &t).unwrap());
            }
        }
    }
}
