use super::relation::ADRelation;
use super::structure::Structure;
use crate::algebra::Term;
use crate::error::{Error, Result};

fn pow(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

pub(crate) fn neg(x: &ADRelation) -> ADRelation {
    x.complement()
}

pub(crate) fn cap(x: &ADRelation, y: &ADRelation) -> ADRelation {
    if x.arity() == y.arity() {
        x.and(y)
    } else {
        ADRelation::empty(x.domain(), 0)
    }
}

/// Suffix intersection: a tuple of the larger arity whose suffixes lie in both.
pub(crate) fn dotcap(x: &ADRelation, y: &ADRelation) -> ADRelation {
    let n = x.domain();
    let m = x.arity().max(y.arity());
    let (mx, my) = (pow(n, x.arity()), pow(n, y.arity()));
    ADRelation::from_fn(n, m, |i| x.get_index(i % mx) && y.get_index(i % my))
}

pub(crate) fn exists(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k == 0 {
        return x.clone();
    }
    let mut out = ADRelation::empty(n, k - 1);
    for i in x.indices() {
        out.set_index(i / n, true);
    }
    out
}

pub(crate) fn exists1(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k < 2 {
        return x.clone();
    }
    let block = pow(n, k - 1);
    let mut out = ADRelation::empty(n, 1);
    for i in x.indices() {
        out.set_index(i / block, true);
    }
    out
}

pub(crate) fn exists0(x: &ADRelation) -> ADRelation {
    ADRelation::boolean(x.domain(), !x.is_empty())
}

pub(crate) fn eq(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k < 2 {
        return x.clone();
    }
    ADRelation::from_fn(n, k, |i| i % n == (i / n) % n && x.get_index(i))
}

/// ā ∈ I(X) iff ā·a_{k-1} ∈ X.
pub(crate) fn subst(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k <= 1 {
        return x.clone();
    }
    ADRelation::from_fn(n, k - 1, |j| x.get_index(j * n + j % n))
}

pub(crate) fn swap(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k < 2 {
        return x.clone();
    }
    let mut out = ADRelation::empty(n, k);
    for i in x.indices() {
        let (last, prev, rest) = (i % n, (i / n) % n, i / (n * n));
        out.set_index((rest * n + last) * n + prev, true);
    }
    out
}

/// ā ∈ p(X) iff (a_k, a_1, ..., a_{k-1}) ∈ X.
pub(crate) fn cyc(x: &ADRelation) -> ADRelation {
    let (n, k) = (x.domain(), x.arity());
    if k < 2 {
        return x.clone();
    }
    let block = pow(n, k - 1);
    let mut out = ADRelation::empty(n, k);
    for i in x.indices() {
        let (first, rest) = (i / block, i % block);
        out.set_index(rest * n + first, true);
    }
    out
}

/// One-dimensional intersection: filters the non-unary argument by unary
/// membership of its last coordinate.
pub(crate) fn onedim(x: &ADRelation, y: &ADRelation) -> ADRelation {
    let n = x.domain();
    match (x.arity(), y.arity()) {
        (1, 1) => x.and(y),
        (1, l) if l >= 2 => ADRelation::from_fn(n, l, |i| y.get_index(i) && x.get_index(i % n)),
        (k, 1) if k >= 2 => ADRelation::from_fn(n, k, |i| x.get_index(i) && y.get_index(i % n)),
        _ => ADRelation::empty(n, 0),
    }
}

/// Interprets a term in a structure. Symbols the structure does not interpret
/// are read as empty relations.
pub fn evaluate(term: &Term, s: &Structure) -> ADRelation {
    let n = s.domain();
    match term {
        Term::Bot => ADRelation::boolean(n, false),
        Term::Top => ADRelation::boolean(n, true),
        Term::Rel(sym) => match s.get(&sym.name) {
            Some(r) if r.arity() == sym.arity => r.clone(),
            _ => ADRelation::empty(n, sym.arity),
        },
        Term::Neg(t) => neg(&evaluate(t, s)),
        Term::Cap(a, b) => cap(&evaluate(a, s), &evaluate(b, s)),
        Term::DotCap(a, b) => dotcap(&evaluate(a, s), &evaluate(b, s)),
        Term::OneDimCap(a, b) => onedim(&evaluate(a, s), &evaluate(b, s)),
        Term::Exists(t) => exists(&evaluate(t, s)),
        Term::Exists1(t) => exists1(&evaluate(t, s)),
        Term::Exists0(t) => exists0(&evaluate(t, s)),
        Term::Eq(t) => eq(&evaluate(t, s)),
        Term::Subst(t) => subst(&evaluate(t, s)),
        Term::Swap(t) => swap(&evaluate(t, s)),
        Term::Cyc(t) => cyc(&evaluate(t, s)),
        Term::Cup(a, b) => neg(&cap(&neg(&evaluate(a, s)), &neg(&evaluate(b, s)))),
        Term::DotCup(a, b) => neg(&dotcap(&neg(&evaluate(a, s)), &neg(&evaluate(b, s)))),
        Term::Forall(t) => neg(&exists(&neg(&evaluate(t, s)))),
        Term::Forall1(t) => neg(&exists1(&neg(&evaluate(t, s)))),
        Term::Forall0(t) => neg(&exists0(&neg(&evaluate(t, s)))),
    }
}

/// Whether the structure models a 0-ary term.
pub fn satisfied(s: &Structure, term: &Term) -> Result<bool> {
    match term.arity() {
        0 => Ok(evaluate(term, s).is_top0()),
        k => Err(Error::NotSentence(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_term, Vocabulary};

    fn structure(n: usize, rels: &[(&str, usize, &[&[usize]])]) -> Structure {
        let vocab = Vocabulary::from_pairs(rels.iter().map(|(n, a, _)| (*n, *a))).unwrap();
        let mut s = Structure::new(n, &vocab);
        for (name, a, tuples) in rels {
            s.set(name, ADRelation::from_tuples(n, *a, tuples.iter()));
        }
        s
    }

    fn eval(src: &str, s: &Structure) -> ADRelation {
        evaluate(&parse_term(src, &s.vocabulary()).unwrap(), s)
    }

    #[test]
    fn swap_reverses_last_two() {
        let s = structure(2, &[("R", 2, &[&[0, 1]])]);
        assert_eq!(eval("s R", &s).tuples(), vec![vec![1, 0]]);
    }

    #[test]
    fn suffix_intersection_with_unary() {
        let s = structure(2, &[("R", 2, &[&[0, 1]]), ("P", 1, &[&[1]])]);
        let r = eval("R dotcap P", &s);
        assert_eq!((r.arity(), r.tuples()), (2, vec![vec![0, 1]]));
    }

    #[test]
    fn diagonal_filter() {
        let s = structure(2, &[("R", 2, &[&[0, 0], &[0, 1]])]);
        assert_eq!(eval("E R", &s).tuples(), vec![vec![0, 0]]);
    }

    #[test]
    fn collapse_to_nullary() {
        let s = structure(3, &[("S", 3, &[&[0, 1, 2]])]);
        assert!(eval("ex0 S", &s).is_top0());
    }

    #[test]
    fn cyclic_shift_moves_last_to_front() {
        let s = structure(3, &[("S", 3, &[&[0, 1, 2]])]);
        // (a_3, a_1, a_2) = (0, 1, 2) means ā = (1, 2, 0).
        assert_eq!(eval("p S", &s).tuples(), vec![vec![1, 2, 0]]);
        assert_eq!(eval("p p p S", &s).tuples(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn substitution_duplicates_last_coordinate() {
        let s = structure(2, &[("S", 3, &[&[0, 1, 1], &[1, 0, 1]])]);
        assert_eq!(eval("I S", &s).tuples(), vec![vec![0, 1]]);
    }

    #[test]
    fn one_dimensional_intersection_cases() {
        let s = structure(2, &[("R", 2, &[&[0, 1], &[1, 0]]), ("P", 1, &[&[1]])]);
        assert_eq!(eval("C(R, P)", &s).tuples(), vec![vec![0, 1]]);
        assert_eq!(eval("C(P, R)", &s).tuples(), vec![vec![0, 1]]);
        assert_eq!(eval("C(P, P)", &s).tuples(), vec![vec![1]]);
        assert_eq!(eval("C(R, R)", &s).arity(), 0);
        assert!(eval("C(R, R)", &s).is_empty());
    }

    #[test]
    fn sentences() {
        let s = structure(2, &[("R", 2, &[&[0, 1]])]);
        assert!(satisfied(&s, &Term::Top).unwrap());
        assert!(!satisfied(&s, &parse_term("ex ex (R cap not R)", &s.vocabulary()).unwrap())
            .unwrap());
        assert!(satisfied(&s, &Term::rel("R", 2)).is_err());
    }
}
