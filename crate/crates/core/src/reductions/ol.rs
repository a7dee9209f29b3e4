//! Ordered-logic sentences to GRA(¬,∩,∃) terms.
//!
//! Membership follows the inductive definition of `OLᵏ`: atoms use exactly
//! the variable prefix `v₁..v_ℓ`, boolean combinations of `OLˡ` and `OLˡ′`
//! formulas lie in every `OLᵏ` with `k ≥ l, l′`, and `∃v_{k+1}` takes `OLᵏ⁺¹`
//! to `OLᵏ`. Translation pushes each quantifier into the disjuncts of its
//! body's DNF so that every boolean connective joins terms of equal arity.

use crate::algebra::{Symbol, Term};
use crate::error::{Error, Result};
use crate::semantics::Fo;

/// The set of `k` with `φ ∈ OLᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Levels {
    From(usize),
    Exactly(usize),
}

impl Levels {
    fn min(self) -> usize {
        match self {
            Levels::From(k) | Levels::Exactly(k) => k,
        }
    }

    fn contains(self, k: usize) -> bool {
        match self {
            Levels::From(m) => k >= m,
            Levels::Exactly(m) => k == m,
        }
    }
}

fn not_ol(f: &Fo, why: impl Into<String>) -> Error {
    Error::NotOrdered(format!("{}: {f}", why.into()))
}

fn levels(f: &Fo) -> Result<Levels> {
    match f {
        Fo::Atom(_, vs) => {
            if vs.is_empty() {
                return Err(not_ol(f, "nullary atom"));
            }
            if vs.iter().enumerate().any(|(i, &v)| v != i + 1) {
                return Err(not_ol(f, format!("atom arguments are not the prefix v1..v{}", vs.len())));
            }
            Ok(Levels::From(vs.len()))
        }
        Fo::Not(g) => Ok(Levels::From(levels(g)?.min())),
        Fo::And(a, b) | Fo::Or(a, b) => Ok(Levels::From(levels(a)?.min().max(levels(b)?.min()))),
        Fo::Exists(v, g) | Fo::Forall(v, g) => {
            let inner = levels(g)?;
            if *v == 0 || !inner.contains(*v) {
                return Err(not_ol(f, format!("quantified variable v{v} is not the highest-index variable of its scope")));
            }
            Ok(Levels::Exactly(v - 1))
        }
        Fo::True | Fo::False => Err(not_ol(f, "truth constants are not ordered-logic formulas")),
        Fo::Equal(..) => Err(not_ol(f, "equality atoms are not ordered-logic formulas")),
    }
}

/// Whether `f` is an ordered-logic sentence.
pub fn is_ol_sentence(f: &Fo) -> Result<()> {
    if !levels(f)?.contains(0) {
        return Err(not_ol(f, "not a sentence"));
    }
    Ok(())
}

/// Boolean combination of terms, each of which may have a different arity.
#[derive(Clone, Debug)]
enum B {
    Unit(Term),
    Not(Box<B>),
    And(Vec<B>),
    Or(Vec<B>),
}

type Literal = (Term, bool);

/// Disjunctive normal form as a list of literal conjunctions.
fn dnf(b: &B, positive: bool) -> Vec<Vec<Literal>> {
    match (b, positive) {
        (B::Unit(t), p) => vec![vec![(t.clone(), p)]],
        (B::Not(x), p) => dnf(x, !p),
        (B::And(xs), true) | (B::Or(xs), false) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for x in xs {
                let d = dnf(x, positive);
                let mut next = Vec::new();
                for a in &acc {
                    for c in &d {
                        let mut conj = a.clone();
                        conj.extend(c.iter().cloned());
                        next.push(conj);
                    }
                }
                acc = next;
            }
            acc
        }
        (B::Or(xs), true) | (B::And(xs), false) => xs.iter().flat_map(|x| dnf(x, positive)).collect(),
    }
}

fn literal(l: &Literal) -> Term {
    if l.1 {
        l.0.clone()
    } else {
        Term::not(l.0.clone())
    }
}

/// `∃v_k body`, with every literal of arity below `k` moved out of the quantifier.
fn exists(body: &B, k: usize) -> B {
    let mut disjuncts = Vec::new();
    for conj in dnf(body, true) {
        let (high, low): (Vec<&Literal>, Vec<&Literal>) = conj.iter().partition(|l| l.0.arity() == k);
        let mut parts: Vec<B> = low.into_iter().map(|l| B::Unit(literal(l))).collect();
        if let Some(h) = Term::fold(high.into_iter().map(literal).collect(), Term::cap) {
            parts.push(B::Unit(Term::ex(h)));
        }
        disjuncts.push(B::And(parts));
    }
    B::Or(disjuncts)
}

fn translate(f: &Fo) -> B {
    match f {
        Fo::Atom(name, vs) => B::Unit(Term::Rel(Symbol::new(name, vs.len()))),
        Fo::Not(g) => B::Not(Box::new(translate(g))),
        Fo::And(a, b) => B::And(vec![translate(a), translate(b)]),
        Fo::Or(a, b) => B::Or(vec![translate(a), translate(b)]),
        Fo::Exists(v, g) => exists(&translate(g), *v),
        Fo::Forall(v, g) => B::Not(Box::new(exists(&B::Not(Box::new(translate(g))), *v))),
        Fo::True | Fo::False | Fo::Equal(..) => unreachable!("rejected by the membership check"),
    }
}

/// Builds a term from a combination whose units all have the same arity.
fn to_term(b: &B) -> Term {
    match b {
        B::Unit(t) => t.clone(),
        B::Not(x) => Term::not(to_term(x)),
        B::And(xs) => Term::fold(xs.iter().map(to_term).collect(), Term::cap).unwrap_or(Term::Top),
        B::Or(xs) => Term::fold(xs.iter().map(to_term).collect(), Term::cup).unwrap_or(Term::Bot),
    }
}

/// Translates an ordered-logic sentence to an equivalent 0-ary term of GRA(¬,∩,∃).
pub fn ol_to_term(sentence: &Fo) -> Result<Term> {
    is_ol_sentence(sentence)?;
    Ok(to_term(&translate(sentence)).desugar())
}
