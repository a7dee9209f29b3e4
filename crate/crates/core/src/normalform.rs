//! Normal forms for the ordered (`∃`) and one-dimensional (`∃₁`/`∃₀`) fragments.
//!
//! Ordered shape:
//! `⋂∃κ ∩ ⋂∀λ ∩ ⋂∀ⁿ(¬α ∪ ∃β) ∩ ⋂∀ⁿ(¬α ∪ ∀β)` with `n = ar α`.
//! One-dimensional shape:
//! `⋂∃₀κ ∩ ⋂∀₀λ ∩ ⋂∀₀(¬α ∪ ∃₁β) ∩ ⋂∀₀(¬α ∪ ∀₁β)` with κ, λ, α unary.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{onedim_arity, operators_used, Op, OpSet, Symbol, Term, Vocabulary};
use crate::error::{Error, Result};
use crate::semantics::{evaluate, ADRelation, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfKind {
    Ordered,
    OneDim,
}

/// A requirement `∀ⁿ(¬α ∪ Qβ)`, or `∀₀(¬α ∪ Q₁β)` in the one-dimensional form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Requirement {
    /// Length of the `∀` prefix (`ar α`); 0 stands for the `∀₀` prefix.
    pub n: usize,
    pub alpha: Term,
    pub beta: Term,
}

/// Dummy-coordinate padding applied to the input symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padding {
    /// Original symbol and its padded counterpart of arity one higher.
    pub symbols: Vec<(Symbol, Symbol)>,
    /// The padded input, a unary term true at the usable dummy values.
    pub shifted: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub kind: NfKind,
    pub kappa: Vec<Term>,
    pub lambda: Vec<Term>,
    pub existential: Vec<Requirement>,
    pub universal: Vec<Requirement>,
    /// Input symbols (padded if `padding` is set) plus fresh symbols.
    pub vocab: Vocabulary,
    pub padding: Option<Padding>,
}

impl NormalForm {
    fn empty(kind: NfKind, vocab: Vocabulary) -> Self {
        NormalForm {
            kind,
            kappa: vec![],
            lambda: vec![],
            existential: vec![],
            universal: vec![],
            vocab,
            padding: None,
        }
    }

    fn requirement_term(&self, r: &Requirement, existential: bool) -> Term {
        let guard = Term::not(r.alpha.clone());
        match self.kind {
            NfKind::Ordered => {
                let q = if existential { Term::ex } else { Term::all };
                Term::repeat(Term::cup(guard, q(r.beta.clone())), r.n, Term::all)
            }
            NfKind::OneDim => {
                let q = if existential { Term::ex1 } else { Term::all1 };
                Term::all0(Term::cup(guard, q(r.beta.clone())))
            }
        }
    }

    /// The normal-form term itself, with `∀` and `∪` kept as sugar.
    pub fn to_term(&self) -> Term {
        let (ex, all): (fn(Term) -> Term, fn(Term) -> Term) = match self.kind {
            NfKind::Ordered => (Term::ex, Term::all),
            NfKind::OneDim => (Term::ex0, Term::all0),
        };
        let mut parts: Vec<Term> = self.kappa.iter().cloned().map(ex).collect();
        parts.extend(self.lambda.iter().cloned().map(all));
        parts.extend(self.existential.iter().map(|r| self.requirement_term(r, true)));
        parts.extend(self.universal.iter().map(|r| self.requirement_term(r, false)));
        Term::fold(parts, Term::cap).unwrap_or(Term::Top)
    }

    pub fn ops(&self) -> OpSet {
        operators_used(&self.to_term())
    }

    /// Maps a model of this normal form to a model of the input term.
    pub fn decode(&self, model: &Structure, input_vocab: &Vocabulary) -> Option<Structure> {
        let Some(pad) = &self.padding else {
            return Some(model.restricted(input_vocab));
        };
        let good = evaluate(&pad.shifted, model);
        let d = (0..model.domain()).find(|&d| good.contains(&[d]))?;
        let n = model.domain();
        let mut out = Structure::new(n, input_vocab);
        for (orig, padded) in &pad.symbols {
            let big = model.get(&padded.name)?;
            let rel = ADRelation::from_fn(n, orig.arity, |i| {
                big.get_index(d * n.pow(orig.arity as u32) + i)
            });
            out.set(&orig.name, rel);
        }
        Some(out)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vocab: {}\nterm: {}", self.vocab, self.to_term())
    }
}

/// The existential and universal requirements of a normal form.
pub fn extract_requirements(nf: &NormalForm) -> (Vec<Requirement>, Vec<Requirement>) {
    (nf.existential.clone(), nf.universal.clone())
}

const ORDERED_OPS: OpSet =
    OpSet::of(&[Op::Subst, Op::Swap, Op::Eq, Op::OneDimCap, Op::Neg, Op::Cap, Op::Exists]);
const ONEDIM_OPS: OpSet = OpSet::of(&[
    Op::Subst,
    Op::Swap,
    Op::Eq,
    Op::OneDimCap,
    Op::Neg,
    Op::Cap,
    Op::DotCap,
    Op::Exists1,
    Op::Exists0,
]);

/// Folds constants and operator applications that act as the identity.
pub fn simplify(t: &Term) -> Term {
    let t = t.map_children(simplify);
    match t {
        Term::Neg(x) => match *x {
            Term::Top => Term::Bot,
            Term::Bot => Term::Top,
            Term::Neg(y) => *y,
            other => Term::not(other),
        },
        Term::Cap(a, b) => {
            if a.arity() != b.arity() || *a == Term::Bot || *b == Term::Bot {
                Term::Bot
            } else if *a == Term::Top {
                *b
            } else if *b == Term::Top || a == b {
                *a
            } else {
                Term::Cap(a, b)
            }
        }
        Term::DotCap(a, b) => {
            if *a == Term::Top {
                *b
            } else if *b == Term::Top {
                *a
            } else if a.arity().max(b.arity()) == 0 && (*a == Term::Bot || *b == Term::Bot) {
                Term::Bot
            } else {
                Term::DotCap(a, b)
            }
        }
        Term::OneDimCap(a, b) => {
            if onedim_arity(a.arity(), b.arity()) == 0 {
                Term::Bot
            } else {
                Term::OneDimCap(a, b)
            }
        }
        Term::Exists(x) | Term::Exists0(x) if x.arity() == 0 => *x,
        Term::Exists1(x) | Term::Eq(x) | Term::Swap(x) | Term::Cyc(x) if x.arity() < 2 => *x,
        Term::Subst(x) if x.arity() <= 1 => *x,
        other => other,
    }
}

fn split_conjuncts(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Cap(a, b) if a.arity() == 0 && b.arity() == 0 => {
            split_conjuncts(a, out);
            split_conjuncts(b, out);
        }
        Term::DotCap(a, b) if a.arity() == 0 && b.arity() == 0 => {
            split_conjuncts(a, out);
            split_conjuncts(b, out);
        }
        other => out.push(other.clone()),
    }
}

fn strip_foralls(t: &Term) -> (usize, &Term) {
    let mut n = 0;
    let mut cur = t;
    while let Term::Forall(inner) = cur {
        n += 1;
        cur = inner;
    }
    (n, cur)
}

enum Piece {
    Kappa(Term),
    Lambda(Term),
    Existential(Requirement),
    Universal(Requirement),
}

fn recognize_piece(t: &Term, kind: NfKind) -> Option<Piece> {
    let qf_unary = |q: &Term| q.is_quantifier_free() && q.arity() == 1;
    match kind {
        NfKind::Ordered => {
            match t {
                Term::Exists(q) if qf_unary(q) => return Some(Piece::Kappa((**q).clone())),
                Term::Neg(e) => {
                    if let Term::Exists(q) = &**e {
                        if qf_unary(q) {
                            return Some(Piece::Lambda(simplify(&Term::not((**q).clone()))));
                        }
                    }
                }
                _ => {}
            }
            let (n, body) = strip_foralls(t);
            if n == 1 && qf_unary(body) {
                return Some(Piece::Lambda(body.clone()));
            }
            let Term::Cup(g, q) = body else { return None };
            let Term::Neg(alpha) = &**g else { return None };
            if n == 0 || alpha.arity() != n || !alpha.is_quantifier_free() {
                return None;
            }
            let (existential, beta) = match &**q {
                Term::Exists(b) => (true, b),
                Term::Forall(b) => (false, b),
                _ => return None,
            };
            if beta.arity() != n + 1 || !beta.is_quantifier_free() {
                return None;
            }
            let r = Requirement { n, alpha: (**alpha).clone(), beta: (**beta).clone() };
            Some(if existential { Piece::Existential(r) } else { Piece::Universal(r) })
        }
        NfKind::OneDim => match t {
            Term::Exists0(q) if qf_unary(q) => Some(Piece::Kappa((**q).clone())),
            Term::Neg(e) => match &**e {
                Term::Exists0(q) if qf_unary(q) => {
                    Some(Piece::Lambda(simplify(&Term::not((**q).clone()))))
                }
                _ => None,
            },
            Term::Forall0(body) => {
                if qf_unary(body) {
                    return Some(Piece::Lambda((**body).clone()));
                }
                let Term::Cup(g, q) = &**body else { return None };
                let Term::Neg(alpha) = &**g else { return None };
                if !qf_unary(alpha) {
                    return None;
                }
                let (existential, beta) = match &**q {
                    Term::Exists1(b) => (true, b),
                    Term::Forall1(b) => (false, b),
                    _ => return None,
                };
                if beta.arity() < 2 || !beta.is_quantifier_free() {
                    return None;
                }
                let r = Requirement { n: 0, alpha: (**alpha).clone(), beta: (**beta).clone() };
                Some(if existential { Piece::Existential(r) } else { Piece::Universal(r) })
            }
            _ => None,
        },
    }
}

/// Reads a term of the exact normal-form shape back into its parts.
pub fn recognize(t: &Term, kind: NfKind) -> Option<NormalForm> {
    let mut nf = NormalForm::empty(kind, t.vocabulary());
    if *t == Term::Top {
        return Some(nf);
    }
    let mut parts = Vec::new();
    split_conjuncts(t, &mut parts);
    for p in parts {
        match recognize_piece(&p, kind)? {
            Piece::Kappa(k) => nf.kappa.push(k),
            Piece::Lambda(l) => nf.lambda.push(l),
            Piece::Existential(r) => nf.existential.push(r),
            Piece::Universal(r) => nf.universal.push(r),
        }
    }
    Some(nf)
}

/// Options for [`to_normal_form_with`].
#[derive(Clone, Copy, Debug)]
pub struct NfOptions {
    /// Use the deterministic padding variant when `C` does not occur.
    pub padding: bool,
    /// Target shape; inferred from the operators when absent.
    pub kind: Option<NfKind>,
}

impl Default for NfOptions {
    fn default() -> Self {
        NfOptions { padding: true, kind: None }
    }
}

struct Fresh {
    taken: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn new(vocab: &Vocabulary) -> Self {
        Fresh { taken: vocab.iter().map(|(n, _)| n.to_string()).collect(), next: 0 }
    }

    fn symbol(&mut self, arity: usize) -> Symbol {
        loop {
            let name = format!("_nf{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return Symbol::new(&name, arity);
            }
        }
    }

    fn primed(&mut self, base: &str, arity: usize) -> Symbol {
        let mut name = format!("{base}'");
        while !self.taken.insert(name.clone()) {
            name.push('\'');
        }
        Symbol::new(&name, arity)
    }
}

fn is_quantifier(t: &Term, kind: NfKind) -> bool {
    match kind {
        NfKind::Ordered => matches!(t, Term::Exists(_)),
        NfKind::OneDim => matches!(t, Term::Exists1(_) | Term::Exists0(_)),
    }
}

/// Leftmost innermost quantified subterm `Q P` with `P` quantifier-free.
fn innermost(t: &Term, kind: NfKind) -> Option<&Term> {
    for c in t.children() {
        if let Some(found) = innermost(c, kind) {
            return Some(found);
        }
    }
    (is_quantifier(t, kind) && t.children()[0].is_quantifier_free()).then_some(t)
}

fn replace(t: &Term, target: &Term, with: &Term) -> Term {
    if t == target {
        with.clone()
    } else {
        t.map_children(|c| replace(c, target, with))
    }
}

/// Rewrites `∃₀P` with `ar P ≥ 2` to `∃₀∃₁P`.
fn split_collapse(t: &Term) -> Term {
    let t = t.map_children(split_collapse);
    match t {
        Term::Exists0(x) if x.arity() >= 2 => Term::ex0(Term::ex1(*x)),
        other => other,
    }
}

struct Conversion {
    kind: NfKind,
    branching: bool,
    fresh: Fresh,
}

struct State {
    nf: NormalForm,
    work: Vec<Term>,
}

struct NeedsGuess;

impl Conversion {
    fn contradiction(&mut self, st: &mut State) {
        let x = self.fresh.symbol(1);
        st.nf.vocab.add(&x.name, 1).expect("fresh symbol");
        let x = Term::Rel(x);
        st.nf.kappa.push(Term::cap(x.clone(), Term::not(x)));
        st.work.clear();
    }

    /// Processes one work item, returning the successor states.
    fn step(&mut self, mut st: State) -> std::result::Result<Vec<State>, NeedsGuess> {
        let Some(w) = st.work.pop() else { return Ok(vec![st]) };
        let w = simplify(&w);
        match &w {
            Term::Top => return Ok(vec![st]),
            Term::Bot => {
                self.contradiction(&mut st);
                return Ok(vec![st]);
            }
            Term::Cap(a, b) | Term::DotCap(a, b) if a.arity() == 0 && b.arity() == 0 => {
                st.work.push((**b).clone());
                st.work.push((**a).clone());
                return Ok(vec![st]);
            }
            _ => {}
        }
        if let Some(piece) = recognize_piece(&w, self.kind) {
            match piece {
                Piece::Kappa(k) => st.nf.kappa.push(k),
                Piece::Lambda(l) => st.nf.lambda.push(l),
                Piece::Existential(_) | Piece::Universal(_) => {
                    unreachable!("desugared work items never match requirement shapes")
                }
            }
            return Ok(vec![st]);
        }
        let target = innermost(&w, self.kind)
            .expect("a 0-ary term not of normal-form shape contains a quantifier")
            .clone();
        let body = target.children()[0].clone();
        if body.arity() >= 2 {
            let (r, n) = match self.kind {
                NfKind::Ordered => (self.fresh.symbol(body.arity() - 1), body.arity() - 1),
                NfKind::OneDim => (self.fresh.symbol(1), 0),
            };
            st.nf.vocab.add(&r.name, r.arity).expect("fresh symbol");
            let rt = Term::Rel(r);
            st.nf.existential.push(Requirement { n, alpha: rt.clone(), beta: body.clone() });
            st.nf.universal.push(Requirement {
                n,
                alpha: Term::not(rt.clone()),
                beta: simplify(&Term::not(body)),
            });
            for other in st.work.iter_mut() {
                *other = replace(other, &target, &rt);
            }
            st.work.push(replace(&w, &target, &rt));
            return Ok(vec![st]);
        }
        if !self.branching {
            return Err(NeedsGuess);
        }
        let mut yes = State { nf: st.nf.clone(), work: st.work.clone() };
        yes.work.push(replace(&w, &target, &Term::Top));
        yes.nf.kappa.push(body.clone());
        let mut no = st;
        no.work.push(replace(&w, &target, &Term::Bot));
        no.nf.lambda.push(simplify(&Term::not(body)));
        Ok(vec![yes, no])
    }

    fn run(&mut self, start: State) -> std::result::Result<Vec<NormalForm>, NeedsGuess> {
        let mut done = Vec::new();
        let mut pending = vec![start];
        while let Some(st) = pending.pop() {
            if st.work.is_empty() {
                done.push(st.nf);
                continue;
            }
            let next = self.step(st)?;
            pending.extend(next.into_iter().rev());
        }
        Ok(done)
    }
}

/// Pads every symbol of a simplified 0-ary term with a leading dummy
/// coordinate. The result is unary; `∃` of it is equisatisfiable with the input.
fn shift(t: &Term, map: &[(Symbol, Symbol)]) -> Term {
    let lift = |x: &Term| shift(x, map);
    match t {
        Term::Rel(s) => {
            let (_, p) = map.iter().find(|(o, _)| o == s).expect("every symbol is padded");
            Term::Rel(p.clone())
        }
        Term::Neg(x) => Term::not(lift(x)),
        Term::Cap(a, b) => Term::cap(lift(a), lift(b)),
        Term::Exists(x) if x.arity() >= 1 => Term::ex(lift(x)),
        Term::Eq(x) if x.arity() >= 2 => Term::eq(lift(x)),
        Term::Subst(x) if x.arity() >= 2 => Term::subst(lift(x)),
        Term::Swap(x) if x.arity() >= 2 => Term::swap(lift(x)),
        Term::Exists(x) | Term::Eq(x) | Term::Subst(x) | Term::Swap(x) => lift(x),
        other => unreachable!("padding applies to simplified C-free ordered terms, got {other}"),
    }
}

fn check_fragment(term: &Term, kind: NfKind) -> Result<()> {
    let ops = operators_used(term);
    let allowed = match kind {
        NfKind::Ordered => ORDERED_OPS,
        NfKind::OneDim => ONEDIM_OPS,
    };
    if !ops.is_subset(allowed) {
        return Err(Error::Fragment { found: ops.to_string(), expected: allowed.to_string() });
    }
    Ok(())
}

/// Which normal form applies to the term's operators, if any.
pub fn kind_for(term: &Term) -> Result<NfKind> {
    let ops = operators_used(term);
    if ops.is_subset(ORDERED_OPS) {
        Ok(NfKind::Ordered)
    } else if ops.is_subset(ONEDIM_OPS) {
        Ok(NfKind::OneDim)
    } else if ops.contains(Op::Exists) && (ops.contains(Op::Exists1) || ops.contains(Op::Exists0)) {
        Err(Error::NormalForm(format!("mixed ∃ and ∃₁/∃₀ in {ops}")))
    } else {
        Err(Error::Fragment {
            found: ops.to_string(),
            expected: format!("{ORDERED_OPS} or {ONEDIM_OPS}"),
        })
    }
}

/// Converts a sentence to a list of normal-form branches, using the
/// deterministic padding variant where possible.
pub fn to_normal_form(term: &Term, vocab: &Vocabulary) -> Result<Vec<NormalForm>> {
    to_normal_form_with(term, vocab, NfOptions::default())
}

pub fn to_normal_form_with(term: &Term, vocab: &Vocabulary, opts: NfOptions) -> Result<Vec<NormalForm>> {
    if term.arity() != 0 {
        return Err(Error::NotSentence(term.arity()));
    }
    let kind = match opts.kind {
        Some(k) => k,
        None => kind_for(term)?,
    };
    check_fragment(term, kind)?;
    let vocab = vocab.merged(&term.vocabulary())?;
    let can_pad = opts.padding && kind == NfKind::Ordered && !operators_used(term).contains(Op::OneDimCap);

    let mut conv = Conversion { kind, branching: !can_pad, fresh: Fresh::new(&vocab) };
    let mut start = State { nf: NormalForm::empty(kind, vocab.clone()), work: vec![] };
    let mut parts = Vec::new();
    split_conjuncts(term, &mut parts);
    for p in parts.iter().rev() {
        match recognize_piece(p, kind) {
            Some(Piece::Kappa(k)) => start.nf.kappa.insert(0, k),
            Some(Piece::Lambda(l)) => start.nf.lambda.insert(0, l),
            Some(Piece::Existential(r)) => start.nf.existential.insert(0, r),
            Some(Piece::Universal(r)) => start.nf.universal.insert(0, r),
            None => {
                let core = p.desugar();
                let core = if kind == NfKind::OneDim { split_collapse(&core) } else { core };
                start.work.push(core);
            }
        }
    }
    if let Ok(branches) = conv.run(start) {
        return Ok(branches);
    }

    // Some quantified subterm is 0-ary; pad the whole input instead of guessing.
    let core = simplify(&term.desugar());
    if core == Term::Top || core == Term::Bot {
        let mut conv = Conversion { kind, branching: false, fresh: Fresh::new(&vocab) };
        let st = State { nf: NormalForm::empty(kind, vocab.clone()), work: vec![core] };
        return conv.run(st).map_err(|_| Error::Internal("constant needs no guess".into()));
    }
    let mut fresh = Fresh::new(&vocab);
    let map: Vec<(Symbol, Symbol)> = core
        .symbols()
        .into_iter()
        .map(|(n, a)| (Symbol::new(&n, a), fresh.primed(&n, a + 1)))
        .collect();
    let shifted = shift(&core, &map);
    let mut padded_vocab = Vocabulary::new();
    for (_, p) in &map {
        padded_vocab.add(&p.name, p.arity)?;
    }
    let mut conv = Conversion { kind, branching: false, fresh };
    let mut nf = NormalForm::empty(kind, padded_vocab);
    nf.padding = Some(Padding { symbols: map, shifted: shifted.clone() });
    let st = State { nf, work: vec![Term::ex(shifted)] };
    conv.run(st).map_err(|_| Error::Internal("padded term still needed a guess".into()))
}

/// Adds `∀₀(¬α ∪ ∃₁β)` for every universal requirement `∀₀(¬α ∪ ∀₁β)` lacking one.
pub fn saturate_universals(nf: &NormalForm) -> Result<NormalForm> {
    if nf.kind != NfKind::OneDim {
        return Err(Error::NormalForm("saturation applies to one-dimensional normal forms".into()));
    }
    let mut out = nf.clone();
    for u in &nf.universal {
        if !out.existential.iter().any(|e| e.alpha == u.alpha && e.beta == u.beta) {
            out.existential.push(u.clone());
        }
    }
    Ok(out)
}

/// Strengthens each existential guard to `α ∩ ¬Iβ`, so that witnesses can be
/// taken distinct from the last guard coordinate.
pub fn witness_distinctness_rewrite(nf: &NormalForm) -> Result<NormalForm> {
    if nf.kind != NfKind::Ordered {
        return Err(Error::NormalForm("the witness rewrite applies to ordered normal forms".into()));
    }
    let mut out = nf.clone();
    for r in out.existential.iter_mut() {
        if r.beta.arity() >= 2 {
            r.alpha = Term::cap(r.alpha.clone(), Term::not(Term::subst(r.beta.clone())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_term;
    use crate::gen::{random_onedim_nf, random_ordered_nf, small_vocabularies, NfShape, TermGen};
    use crate::semantics::satisfied;
    use crate::solvers::oracle::{oracle_sat, sat_at_size, OracleOptions};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model_at(t: &Term, n: usize) -> Option<Structure> {
        let mut opts = OracleOptions::up_to(n);
        opts.min_size = n;
        oracle_sat(t, &opts).unwrap().model().cloned()
    }

    /// Per domain size, the term has a model iff some branch has one, and
    /// every branch model decodes to a model of the term.
    fn check_equisat(t: &Term, vocab: &Vocabulary, max_n: usize) {
        let nfs = to_normal_form(t, vocab).unwrap();
        for n in 1..=max_n {
            let direct = sat_at_size(t, n).unwrap();
            let mut via = false;
            for nf in &nfs {
                let nt = nf.to_term();
                assert!(nf.ops().is_subset(ORDERED_OPS) || nf.ops().is_subset(ONEDIM_OPS));
                assert!(recognize(&nt, nf.kind).is_some(), "not in normal form: {nt}");
                if let Some(m) = model_at(&nt, n) {
                    via = true;
                    let back = nf.decode(&m, vocab).expect("decodable");
                    assert!(satisfied(&back, t).unwrap(), "decoded non-model of {t} from {nt}");
                }
            }
            assert_eq!(direct, via, "size {n}: {t}");
        }
    }

    #[test]
    fn double_exists_introduces_requirements() {
        let v = Vocabulary::parse("R/2").unwrap();
        let t = parse_term("ex ex R", &v).unwrap();
        let nfs = to_normal_form(&t, &v).unwrap();
        assert_eq!(nfs.len(), 1);
        let nf = &nfs[0];
        assert_eq!(nf.kappa.len(), 1);
        assert_eq!(nf.existential.len(), 1);
        assert_eq!(nf.universal.len(), 1);
        assert_eq!(nf.existential[0].n, 1);
        check_equisat(&t, &v, 3);
    }

    #[test]
    fn normal_form_input_is_kept() {
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let t = parse_term("ex P cap all (not P cup ex R) cap all (not P cup all not R)", &v).unwrap();
        let nf = recognize(&t, NfKind::Ordered).unwrap();
        assert_eq!(nf.to_term(), t);
        let nfs = to_normal_form(&t, &v).unwrap();
        assert_eq!(nfs.len(), 1);
        assert_eq!(nfs[0].to_term(), t);
    }

    #[test]
    fn padding_removes_guesses() {
        let v = Vocabulary::parse("P/1, Q/1").unwrap();
        let t = parse_term("not (ex P cap ex Q)", &v).unwrap();
        let nfs = to_normal_form(&t, &v).unwrap();
        assert_eq!(nfs.len(), 1);
        assert!(nfs[0].padding.is_some());
        check_equisat(&t, &v, 3);
        let branched = to_normal_form_with(&t, &v, NfOptions { padding: false, kind: None }).unwrap();
        assert!(branched.len() > 1);
    }

    #[test]
    fn constants() {
        let v = Vocabulary::parse("P/1").unwrap();
        let top = to_normal_form(&parse_term("ex P cup not ex P", &v).unwrap(), &v).unwrap();
        assert!(top.iter().all(|nf| sat_at_size(&nf.to_term(), 1).unwrap()));
        let bot = parse_term("ex (P cap not P)", &v).unwrap();
        check_equisat(&bot, &v, 2);
    }

    #[test]
    fn rejects_mixed_quantifiers() {
        let v = Vocabulary::parse("R/2").unwrap();
        let t = parse_term("ex0 ex1 R cap ex ex R", &v).unwrap();
        assert!(to_normal_form(&t, &v).is_err());
    }

    #[test]
    fn random_ordered_terms_are_equisatisfiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ops = OpSet::of(&[Op::Subst, Op::Swap, Op::Eq, Op::Neg, Op::Cap, Op::Exists]);
        let mut checked = 0;
        for v in small_vocabularies() {
            let g = TermGen::new(&v, ops);
            for _ in 0..40 {
                let Some(t) = g.term(&mut rng, 0, 5) else { continue };
                check_equisat(&t, &v, 3);
                checked += 1;
            }
        }
        assert!(checked >= 20, "only {checked} terms generated");
    }

    #[test]
    fn random_onedim_terms_are_equisatisfiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ops = OpSet::of(&[Op::Swap, Op::Neg, Op::Cap, Op::DotCap, Op::Exists1, Op::Exists0]);
        let mut checked = 0;
        for v in small_vocabularies() {
            let g = TermGen::new(&v, ops);
            for _ in 0..40 {
                let Some(t) = g.term(&mut rng, 0, 5) else { continue };
                check_equisat(&t, &v, 3);
                checked += 1;
            }
        }
        assert!(checked >= 20, "only {checked} terms generated");
    }

    #[test]
    fn generated_shapes_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let (t, v) = random_ordered_nf(&mut rng, NfShape::default());
            let printed = parse_term(&t.to_string(), &v).unwrap();
            assert!(recognize(&printed, NfKind::Ordered).is_some(), "{t}");
            let (t, v) = random_onedim_nf(&mut rng, NfShape::default());
            let printed = parse_term(&t.to_string(), &v).unwrap();
            assert!(recognize(&printed, NfKind::OneDim).is_some(), "{t}");
        }
    }

    #[test]
    fn rewrites_preserve_satisfiability() {
        let v = Vocabulary::parse("P/1, R/2").unwrap();
        let t = parse_term("ex P cap all (not P cup ex (R cap s R))", &v).unwrap();
        let nf = recognize(&t, NfKind::Ordered).unwrap();
        let w = witness_distinctness_rewrite(&nf).unwrap();
        for n in 1..=3 {
            assert_eq!(sat_at_size(&t, n).unwrap(), sat_at_size(&w.to_term(), n).unwrap());
        }
        let t = parse_term("all0 (not P cup all1 R)", &v).unwrap();
        let nf = recognize(&t, NfKind::OneDim).unwrap();
        let s = saturate_universals(&nf).unwrap();
        assert_eq!(s.existential.len(), 1);
    }
}
