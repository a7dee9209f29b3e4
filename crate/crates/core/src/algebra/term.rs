use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ops::{Op, OpSet};
use super::vocab::Vocabulary;

/// A relation symbol together with its declared arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: Arc<str>,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Symbol { name: Arc::from(name), arity }
    }
}

/// GRA term. `Cup`, `DotCup`, `Forall`, `Forall1` and `Forall0` are sugar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Bot,
    Top,
    Rel(Symbol),
    Neg(Box<Term>),
    Cap(Box<Term>, Box<Term>),
    DotCap(Box<Term>, Box<Term>),
    OneDimCap(Box<Term>, Box<Term>),
    Exists(Box<Term>),
    Exists1(Box<Term>),
    Exists0(Box<Term>),
    Eq(Box<Term>),
    Subst(Box<Term>),
    Swap(Box<Term>),
    Cyc(Box<Term>),
    Cup(Box<Term>, Box<Term>),
    DotCup(Box<Term>, Box<Term>),
    Forall(Box<Term>),
    Forall1(Box<Term>),
    Forall0(Box<Term>),
}

macro_rules! unary_ctor {
    ($($fn:ident => $variant:ident),* $(,)?) => {
        $(pub fn $fn(t: Term) -> Term { Term::$variant(Box::new(t)) })*
    };
}

macro_rules! binary_ctor {
    ($($fn:ident => $variant:ident),* $(,)?) => {
        $(pub fn $fn(a: Term, b: Term) -> Term { Term::$variant(Box::new(a), Box::new(b)) })*
    };
}

impl Term {
    pub fn rel(name: &str, arity: usize) -> Term {
        Term::Rel(Symbol::new(name, arity))
    }

    unary_ctor!(
        not => Neg, ex => Exists, ex1 => Exists1, ex0 => Exists0, eq => Eq, subst => Subst,
        swap => Swap, cyc => Cyc, all => Forall, all1 => Forall1, all0 => Forall0,
    );

    binary_ctor!(
        cap => Cap, dotcap => DotCap, onedim => OneDimCap, cup => Cup, dotcup => DotCup,
    );

    /// Applies a unary constructor `n` times.
    pub fn repeat(t: Term, n: usize, f: fn(Term) -> Term) -> Term {
        (0..n).fold(t, |acc, _| f(acc))
    }

    /// Folds a nonempty list with a binary constructor, left-associated.
    pub fn fold(items: Vec<Term>, f: fn(Term, Term) -> Term) -> Option<Term> {
        let mut it = items.into_iter();
        let first = it.next()?;
        Some(it.fold(first, f))
    }

    /// Output arity of the term, independent of any structure.
    pub fn arity(&self) -> usize {
        match self {
            Term::Bot | Term::Top => 0,
            Term::Rel(s) => s.arity,
            Term::Neg(t) | Term::Eq(t) | Term::Swap(t) | Term::Cyc(t) => t.arity(),
            Term::Exists(t) | Term::Forall(t) => t.arity().saturating_sub(1),
            Term::Subst(t) => {
                let k = t.arity();
                if k <= 1 {
                    k
                } else {
                    k - 1
                }
            }
            Term::Exists1(t) | Term::Forall1(t) => t.arity().min(1),
            Term::Exists0(_) | Term::Forall0(_) => 0,
            Term::Cap(a, b) | Term::Cup(a, b) => {
                let (k, l) = (a.arity(), b.arity());
                if k == l {
                    k
                } else {
                    0
                }
            }
            Term::DotCap(a, b) | Term::DotCup(a, b) => a.arity().max(b.arity()),
            Term::OneDimCap(a, b) => onedim_arity(a.arity(), b.arity()),
        }
    }

    pub fn is_sugar(&self) -> bool {
        matches!(
            self,
            Term::Cup(..) | Term::DotCup(..) | Term::Forall(_) | Term::Forall1(_) | Term::Forall0(_)
        )
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Bot | Term::Top | Term::Rel(_) => vec![],
            Term::Neg(t)
            | Term::Exists(t)
            | Term::Exists1(t)
            | Term::Exists0(t)
            | Term::Eq(t)
            | Term::Subst(t)
            | Term::Swap(t)
            | Term::Cyc(t)
            | Term::Forall(t)
            | Term::Forall1(t)
            | Term::Forall0(t) => vec![t],
            Term::Cap(a, b)
            | Term::DotCap(a, b)
            | Term::OneDimCap(a, b)
            | Term::Cup(a, b)
            | Term::DotCup(a, b) => vec![a, b],
        }
    }

    /// Rebuilds this node with each child replaced by `f(child)`.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        let b = |t: Term| Box::new(t);
        match self {
            Term::Bot | Term::Top | Term::Rel(_) => self.clone(),
            Term::Neg(t) => Term::Neg(b(f(t))),
            Term::Exists(t) => Term::Exists(b(f(t))),
            Term::Exists1(t) => Term::Exists1(b(f(t))),
            Term::Exists0(t) => Term::Exists0(b(f(t))),
            Term::Eq(t) => Term::Eq(b(f(t))),
            Term::Subst(t) => Term::Subst(b(f(t))),
            Term::Swap(t) => Term::Swap(b(f(t))),
            Term::Cyc(t) => Term::Cyc(b(f(t))),
            Term::Forall(t) => Term::Forall(b(f(t))),
            Term::Forall1(t) => Term::Forall1(b(f(t))),
            Term::Forall0(t) => Term::Forall0(b(f(t))),
            Term::Cap(x, y) => Term::Cap(b(f(x)), b(f(y))),
            Term::DotCap(x, y) => Term::DotCap(b(f(x)), b(f(y))),
            Term::OneDimCap(x, y) => Term::OneDimCap(b(f(x)), b(f(y))),
            Term::Cup(x, y) => Term::Cup(b(f(x)), b(f(y))),
            Term::DotCup(x, y) => Term::DotCup(b(f(x)), b(f(y))),
        }
    }

    /// Expands all sugar into core operators. A double negation introduced by
    /// expanding `∪`/`⋅∪` around an already negated operand is cancelled.
    pub fn desugar(&self) -> Term {
        fn neg(t: Term) -> Term {
            match t {
                Term::Neg(inner) => *inner,
                other => Term::not(other),
            }
        }
        match self {
            Term::Cup(a, b) => Term::not(Term::cap(neg(a.desugar()), neg(b.desugar()))),
            Term::DotCup(a, b) => Term::not(Term::dotcap(neg(a.desugar()), neg(b.desugar()))),
            Term::Forall(t) => Term::not(Term::ex(Term::not(t.desugar()))),
            Term::Forall1(t) => Term::not(Term::ex1(Term::not(t.desugar()))),
            Term::Forall0(t) => Term::not(Term::ex0(Term::not(t.desugar()))),
            _ => self.map_children(Term::desugar),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    /// Relation symbols occurring in the term, by name.
    pub fn symbols(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeMap<String, usize>) {
        if let Term::Rel(s) = self {
            out.insert(s.name.to_string(), s.arity);
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    /// The vocabulary made of the symbols occurring in the term.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (n, a) in self.symbols() {
            // Symbols inside a well-formed term always carry valid names and arities.
            let _ = v.add(&n, a);
        }
        v
    }

    /// True if no quantifier (∃, ∃₁, ∃₀ or their duals) occurs.
    pub fn is_quantifier_free(&self) -> bool {
        !matches!(
            self,
            Term::Exists(_)
                | Term::Exists1(_)
                | Term::Exists0(_)
                | Term::Forall(_)
                | Term::Forall1(_)
                | Term::Forall0(_)
        ) && self.children().into_iter().all(Term::is_quantifier_free)
    }

    fn op(&self) -> Option<Op> {
        Some(match self {
            Term::Neg(_) => Op::Neg,
            Term::Cap(..) => Op::Cap,
            Term::DotCap(..) => Op::DotCap,
            Term::OneDimCap(..) => Op::OneDimCap,
            Term::Exists(_) => Op::Exists,
            Term::Exists1(_) => Op::Exists1,
            Term::Exists0(_) => Op::Exists0,
            Term::Eq(_) => Op::Eq,
            Term::Subst(_) => Op::Subst,
            Term::Swap(_) => Op::Swap,
            Term::Cyc(_) => Op::Cyc,
            _ => return None,
        })
    }
}

pub(crate) fn onedim_arity(k: usize, l: usize) -> usize {
    match (k, l) {
        (1, 1) => 1,
        (1, l) if l >= 2 => l,
        (k, 1) if k >= 2 => k,
        _ => 0,
    }
}

/// The core operators occurring in the desugared term.
pub fn operators_used(term: &Term) -> OpSet {
    fn walk(t: &Term, acc: &mut OpSet) {
        if let Some(op) = t.op() {
            acc.insert(op);
        }
        for c in t.children() {
            walk(c, acc);
        }
    }
    let mut acc = OpSet::EMPTY;
    walk(&term.desugar(), &mut acc);
    acc
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Atom,
    Unary,
    Infix,
}

fn kind(t: &Term) -> Kind {
    match t {
        Term::Bot | Term::Top | Term::Rel(_) | Term::OneDimCap(..) => Kind::Atom,
        Term::Cap(..) | Term::Cup(..) | Term::DotCap(..) | Term::DotCup(..) => Kind::Infix,
        _ => Kind::Unary,
    }
}

fn unary_keyword(t: &Term) -> &'static str {
    match t {
        Term::Neg(_) => "not",
        Term::Exists(_) => "ex",
        Term::Exists1(_) => "ex1",
        Term::Exists0(_) => "ex0",
        Term::Eq(_) => "E",
        Term::Subst(_) => "I",
        Term::Swap(_) => "s",
        Term::Cyc(_) => "p",
        Term::Forall(_) => "all",
        Term::Forall1(_) => "all1",
        Term::Forall0(_) => "all0",
        _ => unreachable!("not a unary node"),
    }
}

fn infix_keyword(t: &Term) -> &'static str {
    match t {
        Term::Cap(..) => "cap",
        Term::Cup(..) => "cup",
        Term::DotCap(..) => "dotcap",
        Term::DotCup(..) => "dotcup",
        _ => unreachable!("not an infix node"),
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    if kind(t) == Kind::Infix {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Prints in the ASCII term syntax accepted by [`super::parse_term`].
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Bot => f.write_str("bot"),
            Term::Top => f.write_str("top"),
            Term::Rel(s) => f.write_str(&s.name),
            Term::OneDimCap(a, b) => write!(f, "C({a}, {b})"),
            Term::Cap(a, b) | Term::Cup(a, b) | Term::DotCap(a, b) | Term::DotCup(a, b) => {
                write!(f, "{a} {} ", infix_keyword(self))?;
                write_operand(f, b)
            }
            _ => {
                write!(f, "{} ", unary_keyword(self))?;
                write_operand(f, self.children()[0])
            }
        }
    }
}
