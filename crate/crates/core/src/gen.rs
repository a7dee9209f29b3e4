//! Random terms, structures and normal-form instances for testing and fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Op, OpSet, Symbol, Term, Vocabulary};
use crate::reductions::{Agent, ModalFormula};
use crate::semantics::{ADRelation, Structure};

/// Random term generator over a fixed vocabulary and operator set.
#[derive(Clone, Debug)]
pub struct TermGen {
    symbols: Vec<Symbol>,
    ops: OpSet,
    sugar: bool,
    max_arity: usize,
}

impl TermGen {
    pub fn new(vocab: &Vocabulary, ops: OpSet) -> Self {
        let symbols = vocab.iter().map(|(n, a)| Symbol::new(n, a)).collect();
        TermGen { symbols, ops, sugar: false, max_arity: vocab.max_arity() }
    }

    /// Also emit ∪, ⋅∪, ∀, ∀₁, ∀₀ where their expansions are available.
    pub fn with_sugar(mut self, sugar: bool) -> Self {
        self.sugar = sugar;
        self
    }

    fn has(&self, op: Op) -> bool {
        self.ops.contains(op)
    }

    fn leaf<R: Rng>(&self, rng: &mut R, k: usize) -> Option<Term> {
        let candidates: Vec<&Symbol> = self.symbols.iter().filter(|s| s.arity == k).collect();
        if let Some(s) = candidates.choose(rng) {
            return Some(Term::Rel((*s).clone()));
        }
        if k == 0 && rng.gen_bool(0.5) {
            return Some(if rng.gen_bool(0.5) { Term::Top } else { Term::Bot });
        }
        // No symbol of this arity: project one down.
        let mut ways: Vec<u8> = Vec::new();
        if self.has(Op::Exists) && k < self.max_arity {
            ways.push(0);
        }
        if self.has(Op::Subst) && k >= 1 && k < self.max_arity {
            ways.push(1);
        }
        if self.has(Op::Exists1) && k == 1 && self.max_arity >= 2 {
            ways.push(2);
        }
        if self.has(Op::Exists0) && k == 0 && self.max_arity >= 1 {
            ways.push(3);
        }
        match ways.choose(rng)? {
            0 => self.leaf(rng, k + 1).map(Term::ex),
            1 => self.leaf(rng, k + 1).map(Term::subst),
            2 => {
                let r = rng.gen_range(2..=self.max_arity);
                self.leaf(rng, r).map(Term::ex1)
            }
            _ => {
                let r = rng.gen_range(1..=self.max_arity);
                self.leaf(rng, r).map(Term::ex0)
            }
        }
        .or_else(|| (k == 0).then_some(Term::Top))
    }

    /// A random term of arity `k` and depth at most `depth + 1`, if one exists.
    pub fn term<R: Rng>(&self, rng: &mut R, k: usize, depth: usize) -> Option<Term> {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng, k);
        }
        let d = depth - 1;
        let max = self.max_arity;
        for _ in 0..8 {
            let op = *Op::ALL.choose(rng).expect("nonempty");
            if !self.has(op) {
                continue;
            }
            let sugar = self.sugar && rng.gen_bool(0.3);
            let t = match op {
                Op::Neg => self.term(rng, k, d).map(Term::not),
                Op::Cap => {
                    let (a, b) = (self.term(rng, k, d), self.term(rng, k, d));
                    match (a, b) {
                        (Some(a), Some(b)) if sugar && self.has(Op::Neg) => Some(Term::cup(a, b)),
                        (Some(a), Some(b)) => Some(Term::cap(a, b)),
                        _ => None,
                    }
                }
                Op::DotCap => {
                    let j = rng.gen_range(0..=k);
                    let (mut a, mut b) = (self.term(rng, k, d), self.term(rng, j, d));
                    if rng.gen_bool(0.5) {
                        std::mem::swap(&mut a, &mut b);
                    }
                    match (a, b) {
                        (Some(a), Some(b)) if sugar && self.has(Op::Neg) => {
                            Some(Term::dotcup(a, b))
                        }
                        (Some(a), Some(b)) => Some(Term::dotcap(a, b)),
                        _ => None,
                    }
                }
                Op::OneDimCap => {
                    if k == 0 {
                        None
                    } else {
                        let a = self.term(rng, k, d);
                        let b = self.term(rng, 1, d);
                        match (a, b) {
                            (Some(a), Some(b)) if rng.gen_bool(0.5) => Some(Term::onedim(a, b)),
                            (Some(a), Some(b)) => Some(Term::onedim(b, a)),
                            _ => None,
                        }
                    }
                }
                Op::Exists => {
                    if k < max {
                        let f = if sugar && self.has(Op::Neg) { Term::all } else { Term::ex };
                        self.term(rng, k + 1, d).map(f)
                    } else {
                        None
                    }
                }
                Op::Exists1 => {
                    let f = if sugar && self.has(Op::Neg) { Term::all1 } else { Term::ex1 };
                    match k {
                        0 => self.term(rng, 0, d).map(f),
                        1 => {
                            let r = rng.gen_range(1..=max.max(1));
                            self.term(rng, r, d).map(f)
                        }
                        _ => None,
                    }
                }
                Op::Exists0 => {
                    let f = if sugar && self.has(Op::Neg) { Term::all0 } else { Term::ex0 };
                    if k == 0 {
                        let r = rng.gen_range(0..=max);
                        self.term(rng, r, d).map(f)
                    } else {
                        None
                    }
                }
                Op::Eq => self.term(rng, k, d).map(Term::eq),
                Op::Swap => self.term(rng, k, d).map(Term::swap),
                Op::Cyc => self.term(rng, k, d).map(Term::cyc),
                Op::Subst => {
                    if k >= 1 && k < max {
                        self.term(rng, k + 1, d).map(Term::subst)
                    } else if k == 1 {
                        self.term(rng, 1, d).map(Term::subst)
                    } else {
                        None
                    }
                }
            };
            if t.is_some() {
                return t;
            }
        }
        self.leaf(rng, k)
    }

    /// A random term whose arity is drawn from `0..=max_arity`.
    pub fn any_term<R: Rng>(&self, rng: &mut R, depth: usize) -> Term {
        loop {
            let k = rng.gen_range(0..=self.max_arity);
            if let Some(t) = self.term(rng, k, depth) {
                return t;
            }
        }
    }
}

/// A structure with every tuple present independently with probability `density`.
pub fn random_structure<R: Rng>(rng: &mut R, vocab: &Vocabulary, n: usize, density: f64) -> Structure {
    let mut s = Structure::new(n, vocab);
    for (name, a) in vocab.iter() {
        s.set(name, ADRelation::from_fn(n, a, |_| rng.gen_bool(density)));
    }
    s
}

/// A structure with a random size in `1..=max_n` and a random density per relation.
pub fn random_small_structure<R: Rng>(rng: &mut R, vocab: &Vocabulary, max_n: usize) -> Structure {
    let n = rng.gen_range(1..=max_n);
    let mut s = Structure::new(n, vocab);
    for (name, a) in vocab.iter() {
        let density = *[0.2, 0.5, 0.8].choose(rng).expect("nonempty");
        s.set(name, ADRelation::from_fn(n, a, |_| rng.gen_bool(density)));
    }
    s
}

/// Small vocabularies with at most two symbols of arity at most 3.
pub fn small_vocabularies() -> Vec<Vocabulary> {
    ["P/1, R/2", "P/1, T/3", "R/2, T/3", "P/1, Q/1", "R/2"]
        .iter()
        .map(|v| Vocabulary::parse(v).expect("valid vocabulary"))
        .collect()
}

fn qf<R: Rng>(rng: &mut R, g: &TermGen, k: usize, depth: usize) -> Option<Term> {
    g.term(rng, k, depth)
}

/// Shape limits for random normal forms.
#[derive(Clone, Copy, Debug)]
pub struct NfShape {
    pub max_kappa: usize,
    pub max_lambda: usize,
    pub max_requirements: usize,
    pub body_depth: usize,
}

impl Default for NfShape {
    fn default() -> Self {
        NfShape { max_kappa: 2, max_lambda: 1, max_requirements: 3, body_depth: 2 }
    }
}

/// A random normal-form sentence of GRA(E,¬,∩,∃) over one of [`small_vocabularies`].
pub fn random_ordered_nf<R: Rng>(rng: &mut R, shape: NfShape) -> (Term, Vocabulary) {
    let vocab = small_vocabularies().choose(rng).expect("nonempty").clone();
    let g = TermGen::new(&vocab, OpSet::of(&[Op::Eq, Op::Neg, Op::Cap]));
    let arities: Vec<usize> = vocab.iter().map(|(_, a)| a).collect();
    let mut parts = Vec::new();
    if arities.contains(&1) {
        for _ in 0..rng.gen_range(0..=shape.max_kappa) {
            parts.extend(qf(rng, &g, 1, shape.body_depth).map(Term::ex));
        }
        for _ in 0..rng.gen_range(0..=shape.max_lambda) {
            parts.extend(qf(rng, &g, 1, shape.body_depth).map(Term::all));
        }
    }
    let guards: Vec<usize> = (1..3).filter(|n| arities.contains(n) && arities.contains(&(n + 1))).collect();
    if !guards.is_empty() {
        for _ in 0..rng.gen_range(0..=shape.max_requirements) {
            let n = *guards.choose(rng).expect("nonempty");
            let alpha = qf(rng, &g, n, shape.body_depth);
            let beta = qf(rng, &g, n + 1, shape.body_depth);
            if let (Some(alpha), Some(beta)) = (alpha, beta) {
                let body = if rng.gen_bool(0.6) { Term::ex(beta) } else { Term::all(beta) };
                let req = Term::cup(Term::not(alpha), body);
                parts.push(Term::repeat(req, n, Term::all));
            }
        }
    }
    (Term::fold(parts, Term::cap).unwrap_or(Term::Top), vocab)
}

/// A random normal-form sentence of GRA(E,¬,∩,∃₁,∃₀) over one of [`small_vocabularies`].
pub fn random_onedim_nf<R: Rng>(rng: &mut R, shape: NfShape) -> (Term, Vocabulary) {
    let vocab = small_vocabularies().choose(rng).expect("nonempty").clone();
    let g = TermGen::new(&vocab, OpSet::of(&[Op::Eq, Op::Neg, Op::Cap]));
    let arities: Vec<usize> = vocab.iter().map(|(_, a)| a).collect();
    let mut parts = Vec::new();
    if arities.contains(&1) {
        for _ in 0..rng.gen_range(0..=shape.max_kappa) {
            parts.extend(qf(rng, &g, 1, shape.body_depth).map(Term::ex0));
        }
        for _ in 0..rng.gen_range(0..=shape.max_lambda) {
            parts.extend(qf(rng, &g, 1, shape.body_depth).map(Term::all0));
        }
        let bodies: Vec<usize> = arities.iter().copied().filter(|&a| a >= 2).collect();
        if !bodies.is_empty() {
            for _ in 0..rng.gen_range(0..=shape.max_requirements) {
                let r = *bodies.choose(rng).expect("nonempty");
                let alpha = qf(rng, &g, 1, shape.body_depth);
                let beta = qf(rng, &g, r, shape.body_depth);
                if let (Some(alpha), Some(beta)) = (alpha, beta) {
                    let body = if rng.gen_bool(0.6) { Term::ex1(beta) } else { Term::all1(beta) };
                    parts.push(Term::all0(Term::cup(Term::not(alpha), body)));
                }
            }
        }
    }
    (Term::fold(parts, Term::cap).unwrap_or(Term::Top), vocab)
}

/// A random modal formula of depth at most `depth` over `p1..p{props}`,
/// using the given modalities.
pub fn random_modal<R: Rng>(rng: &mut R, depth: usize, props: usize, agents: &[Agent]) -> ModalFormula {
    match rng.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 | 1 => ModalFormula::prop(rng.gen_range(1..=props)),
        2 => ModalFormula::not(random_modal(rng, depth, props, agents)),
        3 => ModalFormula::and(random_modal(rng, depth, props, agents), random_modal(rng, depth, props, agents)),
        _ => ModalFormula::dia(*agents.choose(rng).expect("nonempty"), random_modal(rng, depth - 1, props, agents)),
    }
}
