//! Decision procedure for GRA(E,¬,∩,∃₁,∃₀).
//!
//! In one-dimensional normal form a body of arity `k` only reads the `k`-ary
//! facts of a tuple `(a, b₂..b_k)` and whether `b_{k−1} = b_k`. Tuples are
//! owned by their first element, so the search guesses a 1-type per element
//! and, per element and applicable existential requirement, a witness tuple
//! and its table. Every remaining tuple is then completed with a table that
//! respects the universal requirements.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use super::bounds::polynomial_bound;
use super::qf::{Qf, SymbolIndex};
use super::{SatStatus, SatVerdict, SolveStats, SolverOptions};
use crate::algebra::{operators_used, Op, OpSet, Term};
use crate::error::{Error, Result};
use crate::normalform::{saturate_universals, to_normal_form_with, NfKind, NfOptions, NormalForm};
use crate::semantics::{satisfied, Structure};

pub const FRAGMENT: OpSet = OpSet::of(&[Op::Eq, Op::Neg, Op::Cap, Op::Exists1, Op::Exists0]);

const MAX_TABLE_BITS: u32 = 20;

struct Req {
    alpha: Qf,
    beta: Qf,
    arity: usize,
}

struct Problem {
    index: SymbolIndex,
    kappa: Vec<Qf>,
    lambda: Vec<Qf>,
    existential: Vec<Req>,
    universal: Vec<Req>,
    /// Arities of the requirement bodies.
    arities: BTreeSet<usize>,
}

impl Problem {
    fn new(nf: &NormalForm) -> Result<Problem> {
        let index = SymbolIndex::new(&nf.vocab)?;
        let compile = |t: &Term| Qf::compile(t, &index);
        let reqs = |rs: &[crate::normalform::Requirement]| -> Result<Vec<Req>> {
            rs.iter()
                .map(|r| {
                    let beta = compile(&r.beta)?;
                    Ok(Req { alpha: compile(&r.alpha)?, arity: beta.arity(), beta })
                })
                .collect()
        };
        let existential = reqs(&nf.existential)?;
        let universal = reqs(&nf.universal)?;
        let arities = existential.iter().chain(&universal).map(|r| r.arity).collect();
        Ok(Problem {
            kappa: nf.kappa.iter().map(compile).collect::<Result<_>>()?,
            lambda: nf.lambda.iter().map(compile).collect::<Result<_>>()?,
            existential,
            universal,
            arities,
            index,
        })
    }

    /// All tables over the symbols of arity exactly `k`, in lexicographic bit order.
    fn tables(&self, k: usize) -> Result<Vec<u64>> {
        let mask = self.index.mask(|a| a == k);
        let bits: Vec<u32> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        if bits.len() as u32 > MAX_TABLE_BITS {
            return Err(Error::Input(format!("{} symbols of arity {k} exceed the table limit", bits.len())));
        }
        Ok((0u64..1 << bits.len())
            .map(|x| bits.iter().enumerate().fold(0, |t, (j, &b)| t | (x >> j & 1) << b))
            .collect())
    }
}

/// Number of tuples `(a, b₂..b_k)` over `n` elements with the given
/// equality flag `b_{k−1} = b_k`.
fn flag_count(n: usize, k: usize, eq: bool) -> usize {
    let base = n.saturating_pow(k as u32 - 2);
    if eq {
        base
    } else {
        base.saturating_mul(n - 1)
    }
}

/// The `j`-th tuple `(a, b₂..b_k)` in lexicographic order with the given flag.
fn flag_tuple(n: usize, k: usize, a: usize, eq: bool, j: usize) -> Vec<usize> {
    let mut seen = 0;
    let total = n.pow(k as u32 - 1);
    for idx in 0..total {
        let mut t = vec![a];
        let mut rest = Vec::with_capacity(k - 1);
        let mut x = idx;
        for _ in 1..k {
            rest.push(x % n);
            x /= n;
        }
        rest.reverse();
        t.extend(rest);
        if (t[k - 2] == t[k - 1]) == eq {
            if seen == j {
                return t;
            }
            seen += 1;
        }
    }
    unreachable!("slot index within the flag count")
}

/// Choices for the tuples of one element at one arity.
#[derive(Clone, Debug, Default)]
struct ArityPlan {
    /// Witness tuples as `(flag, table)`; slots are numbered per flag in order.
    witnesses: Vec<(bool, u64)>,
    assigned: Vec<(usize, usize)>,
    /// Table of every other tuple, per flag.
    filler: [Option<u64>; 2],
}

#[derive(Clone, Debug, Default)]
struct TypePlan {
    per_arity: Vec<(usize, ArityPlan)>,
}

fn cover(
    pending: &[(usize, &Qf)],
    cands: &[Vec<u64>; 2],
    caps: [usize; 2],
    plan: &mut ArityPlan,
) -> bool {
    let Some(&(req, beta)) = pending.first() else { return true };
    for slot in 0..plan.witnesses.len() {
        let (eq, t) = plan.witnesses[slot];
        if beta.eval(eq, t) {
            plan.assigned.push((req, slot));
            if cover(&pending[1..], cands, caps, plan) {
                return true;
            }
            plan.assigned.pop();
        }
    }
    for eq in [true, false] {
        let used = plan.witnesses.iter().filter(|w| w.0 == eq).count();
        if used >= caps[eq as usize] {
            continue;
        }
        for &t in &cands[eq as usize] {
            if plan.witnesses.contains(&(eq, t)) || !beta.eval(eq, t) {
                continue;
            }
            plan.witnesses.push((eq, t));
            plan.assigned.push((req, plan.witnesses.len() - 1));
            if cover(&pending[1..], cands, caps, plan) {
                return true;
            }
            plan.assigned.pop();
            plan.witnesses.pop();
        }
    }
    false
}

struct Search<'a> {
    p: &'a Problem,
    size: usize,
    tables: HashMap<usize, Vec<u64>>,
    branches: u64,
}

impl Search<'_> {
    /// Witness and completion choices for an element of 1-type `ty`, if any exist.
    fn type_plan(&mut self, ty: u64) -> Option<TypePlan> {
        let p = self.p;
        if !p.lambda.iter().all(|l| l.eval(false, ty)) {
            return None;
        }
        let mut plan = TypePlan::default();
        for &k in &p.arities {
            self.branches += 1;
            let caps = [flag_count(self.size, k, false), flag_count(self.size, k, true)];
            let universal: Vec<&Qf> = p
                .universal
                .iter()
                .filter(|r| r.arity == k && r.alpha.eval(false, ty))
                .map(|r| &r.beta)
                .collect();
            let pending: Vec<(usize, &Qf)> = p
                .existential
                .iter()
                .enumerate()
                .filter(|(_, r)| r.arity == k && r.alpha.eval(false, ty))
                .map(|(i, r)| (i, &r.beta))
                .collect();
            let tables = &self.tables[&k];
            let cands: [Vec<u64>; 2] = [false, true].map(|eq| {
                tables.iter().copied().filter(|&t| universal.iter().all(|u| u.eval(eq, t))).collect()
            });
            let mut ap = ArityPlan::default();
            for eq in [false, true] {
                if caps[eq as usize] > 0 {
                    ap.filler[eq as usize] = Some(*cands[eq as usize].first()?);
                }
            }
            if !cover(&pending, &cands, caps, &mut ap) {
                return None;
            }
            plan.per_arity.push((k, ap));
        }
        Some(plan)
    }

    /// A 1-type per element, with each κ realized, or `None`.
    fn assign_types(&mut self) -> Result<Option<Vec<(u64, TypePlan)>>> {
        let p = self.p;
        let mut feasible = Vec::new();
        for ty in p.tables(1)? {
            if let Some(plan) = self.type_plan(ty) {
                feasible.push((ty, plan));
            }
        }
        if feasible.is_empty() {
            return Ok(None);
        }
        let mut chosen: Vec<usize> = Vec::new();
        if !cover_kappa(&p.kappa, 0, &feasible, self.size, &mut chosen) {
            return Ok(None);
        }
        let mut out: Vec<(u64, TypePlan)> = chosen.iter().map(|&i| feasible[i].clone()).collect();
        out.resize(self.size, feasible[0].clone());
        Ok(Some(out))
    }
}

fn cover_kappa(
    kappa: &[Qf],
    i: usize,
    feasible: &[(u64, TypePlan)],
    size: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let Some(k) = kappa.get(i) else { return true };
    if chosen.iter().any(|&c| k.eval(false, feasible[c].0)) {
        return cover_kappa(kappa, i + 1, feasible, size, chosen);
    }
    if chosen.len() >= size {
        return false;
    }
    for (c, (ty, _)) in feasible.iter().enumerate() {
        if k.eval(false, *ty) {
            chosen.push(c);
            if cover_kappa(kappa, i + 1, feasible, size, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn fmt_tuple(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Performs the completion: writes every chosen and filler table into a structure.
fn complete(p: &Problem, nf: &NormalForm, size: usize, types: &[(u64, TypePlan)], trace: &mut Option<Vec<String>>) -> Structure {
    let mut model = Structure::new(size, &nf.vocab);
    let write = |model: &mut Structure, tuple: &[usize], bits: u64| {
        for (i, name, a) in p.index.iter() {
            if a == tuple.len() && bits >> i & 1 == 1 {
                let name = name.to_string();
                model.get_mut(&name).expect("declared symbol").insert(tuple);
            }
        }
    };
    let mut log = |line: String| {
        if let Some(t) = trace {
            t.push(line);
        }
    };
    for (a, (ty, plan)) in types.iter().enumerate() {
        log(format!("guess type {a} {ty:b}"));
        write(&mut model, &[a], *ty);
        for (k, ap) in &plan.per_arity {
            let k = *k;
            let mut slot_tuples = Vec::new();
            let mut per_flag = [0usize; 2];
            for &(eq, t) in &ap.witnesses {
                let tuple = flag_tuple(size, k, a, eq, per_flag[eq as usize]);
                per_flag[eq as usize] += 1;
                log(format!("guess table {} {t:b}", fmt_tuple(&tuple)));
                slot_tuples.push((tuple, t));
            }
            for &(req, slot) in &ap.assigned {
                log(format!("guess witness {a} {req} {}", fmt_tuple(&slot_tuples[slot].0)));
            }
            let rel_total = size.pow(k as u32 - 1);
            for idx in 0..rel_total {
                let mut rest = Vec::with_capacity(k - 1);
                let mut x = idx;
                for _ in 1..k {
                    rest.push(x % size);
                    x /= size;
                }
                rest.reverse();
                let mut tuple = vec![a];
                tuple.extend(rest);
                let eq = tuple[k - 2] == tuple[k - 1];
                let t = slot_tuples
                    .iter()
                    .find(|(w, _)| *w == tuple)
                    .map(|w| w.1)
                    .or(ap.filler[eq as usize])
                    .expect("filler for an occurring flag");
                write(&mut model, &tuple, t);
            }
        }
    }
    model
}

/// Decides satisfiability of a sentence of GRA(E,¬,∩,∃₁,∃₀).
pub fn solve_onedim_eq(term: &Term) -> Result<SatVerdict> {
    solve_onedim_eq_with(term, &SolverOptions::default())
}

pub fn solve_onedim_eq_with(term: &Term, opts: &SolverOptions) -> Result<SatVerdict> {
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
    let nf_opts = NfOptions { kind: Some(NfKind::OneDim), ..NfOptions::default() };
    let branches = to_normal_form_with(term, &input_vocab, nf_opts)?;
    let many = branches.len() > 1;
    for (bi, nf) in branches.iter().enumerate() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            stats.elapsed = start.elapsed();
            return Ok(SatVerdict { status: SatStatus::Unknown, stats, trace: vec![] });
        }
        let nf = saturate_universals(nf)?;
        let p = Problem::new(&nf)?;
        let bound = polynomial_bound(nf.kappa.len(), nf.existential.len());
        let mut tables = HashMap::new();
        for &k in &p.arities {
            tables.insert(k, p.tables(k)?);
        }
        for size in [1, bound] {
            stats.max_size_tried = stats.max_size_tried.max(size);
            let mut s = Search { p: &p, size, tables: tables.clone(), branches: 0 };
            let types = s.assign_types()?;
            stats.branches += s.branches;
            let Some(types) = types else { continue };
            let mut trace = opts.trace.then(Vec::new);
            let model = complete(&p, &nf, size, &types, &mut trace);
            let decoded = nf
                .decode(&model, &input_vocab)
                .ok_or_else(|| Error::Internal("normal-form model does not decode".into()))?;
            if !satisfied(&decoded, term)? {
                return Err(Error::Internal(format!("completed structure does not satisfy {term}")));
            }
            let mut trace = trace.unwrap_or_default();
            if many {
                trace.insert(0, format!("guess branch {bi}"));
            }
            trace.insert(0, format!("guess size {size}"));
            stats.elapsed = start.elapsed();
            return Ok(SatVerdict { status: SatStatus::Sat(decoded), stats, trace });
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
        solve_onedim_eq(&parse_term(src, &v).unwrap()).unwrap()
    }

    #[test]
    fn flag_tuples_partition() {
        for (n, k) in [(1, 2), (3, 2), (2, 3), (3, 3)] {
            let t = flag_count(n, k, true);
            let f = flag_count(n, k, false);
            assert_eq!(t + f, n.pow(k as u32 - 1));
            for j in 0..t {
                let x = flag_tuple(n, k, 0, true, j);
                assert_eq!(x[k - 2], x[k - 1]);
            }
            for j in 0..f {
                let x = flag_tuple(n, k, 0, false, j);
                assert_ne!(x[k - 2], x[k - 1]);
            }
        }
    }

    #[test]
    fn simple_verdicts() {
        assert!(verdict("ex0 P cap all0 not P", "P/1").is_unsat());
        let v = verdict("ex0 P cap all0 (not P cup ex1 R)", "P/1, R/2");
        assert!(v.model().unwrap().domain() <= 2);
    }

    #[test]
    fn equality_needs_two_elements() {
        let v = verdict("ex0 P cap all0 (not P cup ex1 (R cap not E (R cup not R)))", "P/1, R/2");
        assert_eq!(v.model().unwrap().domain(), 2);
        let v = verdict("ex0 P cap all0 all1 E (R cup not R) cap ex0 not P", "P/1, R/2");
        assert!(v.is_unsat());
    }

    #[test]
    fn agrees_with_oracle_on_random_normal_forms() {
        use crate::gen::{random_onedim_nf, NfShape};
        use crate::solvers::oracle::brute_force_sat;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let (t, _) = random_onedim_nf(&mut rng, NfShape::default());
            let ours = solve_onedim_eq(&t).unwrap();
            let oracle = brute_force_sat(&t, 3).unwrap();
            assert_eq!(oracle.is_sat(), ours.is_sat(), "{t}");
            if let Some(m) = ours.model() {
                assert!(satisfied(m, &t).unwrap());
            }
        }
    }

    #[test]
    fn trace_records_guesses() {
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let t = parse_term("ex0 P cap all0 (not P cup ex1 R)", &v).unwrap();
        let r = solve_onedim_eq_with(&t, &SolverOptions { trace: true, ..Default::default() }).unwrap();
        assert!(r.trace.iter().any(|l| l.starts_with("guess witness")));
    }
}
