//! A sentence of GRA(¬,∩,∃,s,C,E) with only infinite models.
//!
//! Over `Z/1, S/2, F/3` the axiom states that `Z` is nonempty, every element
//! has an `S`-successor outside `Z`, and, through `F`, that no element has
//! two `S`-predecessors. On a finite domain these force `S` to be a
//! permutation, so the predecessor of an element of `Z` has no successor
//! outside `Z`.

use crate::algebra::{parse_term, Term, Vocabulary};
use crate::semantics::Structure;

pub const VOCABULARY: &str = "Z/1, S/2, F/3";

/// Conjuncts `S(v₃,v₁) → F(v₁,v₂,v₃)` for `v₂ ≠ v₃` and `F(v₁,v₂,·) → ¬S(v₂,v₁)`.
const INJECTIVITY: [(&str, &str); 2] = [
    ("forces F", "all all (not s S cup all s (E (F cup not F) cup F))"),
    ("unique predecessor", "all all (not ex F cup not s S)"),
];

fn vocab(extra: &str) -> Vocabulary {
    Vocabulary::parse(&format!("{VOCABULARY}{extra}")).expect("fixed vocabulary")
}

fn parse(src: &str, v: &Vocabulary) -> Term {
    parse_term(src, v).expect("fixed term")
}

/// The named conjuncts of the axiom.
pub fn infinity_conjuncts() -> Vec<(&'static str, Term)> {
    let v = vocab("");
    let mut out = vec![
        ("Z nonempty", parse("ex Z", &v)),
        ("successor outside Z", parse("all ex C(S, not Z)", &v)),
    ];
    out.extend(INJECTIVITY.iter().map(|&(name, src)| (name, parse(src, &v))));
    out
}

pub fn infinity_axiom() -> Term {
    Term::fold(infinity_conjuncts().into_iter().map(|c| c.1).collect(), Term::cap).expect("nonempty")
}

/// The axiom without `C`: a binary `Zp` marks chosen successors, which must lie outside `Z`.
pub fn infinity_axiom_c_free() -> Term {
    let v = vocab(", Zp/2");
    let mut parts = vec![
        parse("ex Z", &v),
        parse("all ex (S cap Zp)", &v),
        parse("all (not ex s Zp cup not Z)", &v),
    ];
    parts.extend(INJECTIVITY.iter().map(|&(_, src)| parse(src, &v)));
    Term::fold(parts, Term::cap).expect("nonempty")
}

/// The successor chain `0 → 1 → … → n−1` with `Z = {0}` and `F` as the
/// injectivity conjuncts demand. Every conjunct holds except that `n−1` has
/// no successor.
pub fn truncated_chain(n: usize) -> Structure {
    let mut s = Structure::new(n, &vocab(""));
    s.get_mut("Z").expect("declared").insert(&[0]);
    for i in 0..n.saturating_sub(1) {
        s.get_mut("S").expect("declared").insert(&[i, i + 1]);
        for b in (0..n).filter(|&b| b != i) {
            s.get_mut("F").expect("declared").insert(&[i + 1, b, i]);
        }
    }
    s
}
