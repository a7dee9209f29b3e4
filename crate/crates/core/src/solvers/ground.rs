//! Grounding of a sentence over a fixed finite domain into clauses.
//!
//! Every atomic fact `R(ā)` becomes a variable; every subterm becomes a
//! vector of gate outputs, one per tuple, encoded with full equivalences so
//! that auxiliary variables are determined by the facts.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use super::cdcl::{Lit, SolveResult, Solver, Var};
use crate::algebra::{Term, Vocabulary};
use crate::semantics::{ADRelation, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum B {
    T,
    F,
    L(Lit),
}

impl B {
    fn negate(self) -> B {
        match self {
            B::T => B::F,
            B::F => B::T,
            B::L(l) => B::L(!l),
        }
    }
}

pub struct Grounding {
    n: usize,
    solver: Solver,
    atoms: BTreeMap<String, (usize, Var)>,
    gates: HashMap<Vec<Lit>, Lit>,
    memo: HashMap<Term, Vec<B>>,
}

impl Grounding {
    /// Grounds `term` (a sentence) at domain size `n`, asserting it true.
    /// Symbols of `vocab` not in the term still get fact variables.
    pub fn new(term: &Term, vocab: &Vocabulary, n: usize) -> Grounding {
        let mut g = Grounding {
            n,
            solver: Solver::new(),
            atoms: BTreeMap::new(),
            gates: HashMap::new(),
            memo: HashMap::new(),
        };
        let all = vocab.merged(&term.vocabulary()).unwrap_or_else(|_| term.vocabulary());
        for (name, arity) in all.iter() {
            let count = n.pow(arity as u32);
            let base = g.solver.num_vars() as Var;
            for _ in 0..count {
                g.solver.new_var();
            }
            g.atoms.insert(name.to_string(), (arity, base));
        }
        let root = g.ground(&term.desugar());
        debug_assert_eq!(root.len(), 1, "sentences ground to one output");
        match root[0] {
            B::T => {}
            B::F => {
                g.solver.add_clause(&[]);
            }
            B::L(l) => {
                g.solver.add_clause(&[l]);
            }
        }
        g
    }

    pub fn num_vars(&self) -> usize {
        self.solver.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.solver.num_clauses()
    }

    pub fn stats(&self) -> super::cdcl::Stats {
        self.solver.stats
    }

    fn and(&mut self, inputs: &[B]) -> B {
        let mut lits = Vec::with_capacity(inputs.len());
        for &b in inputs {
            match b {
                B::F => return B::F,
                B::T => {}
                B::L(l) => lits.push(l),
            }
        }
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return B::F;
        }
        match lits.len() {
            0 => B::T,
            1 => B::L(lits[0]),
            _ => {
                if let Some(&g) = self.gates.get(&lits) {
                    return B::L(g);
                }
                let g = Lit::pos(self.solver.new_var());
                for &l in &lits {
                    self.solver.add_clause(&[!g, l]);
                }
                let mut big: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                big.push(g);
                self.solver.add_clause(&big);
                self.gates.insert(lits, g);
                B::L(g)
            }
        }
    }

    fn or(&mut self, inputs: &[B]) -> B {
        let negated: Vec<B> = inputs.iter().map(|b| b.negate()).collect();
        self.and(&negated).negate()
    }

    fn ground(&mut self, t: &Term) -> Vec<B> {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let out = self.ground_uncached(t);
        self.memo.insert(t.clone(), out.clone());
        out
    }

    fn ground_uncached(&mut self, t: &Term) -> Vec<B> {
        let n = self.n;
        let pow = |k: usize| n.pow(k as u32);
        match t {
            Term::Bot => vec![B::F],
            Term::Top => vec![B::T],
            Term::Rel(s) => match self.atoms.get(&*s.name) {
                Some(&(a, base)) if a == s.arity => {
                    (0..pow(a)).map(|i| B::L(Lit::pos(base + i as Var))).collect()
                }
                _ => vec![B::F; pow(s.arity)],
            },
            Term::Neg(a) => self.ground(a).into_iter().map(B::negate).collect(),
            Term::Cap(a, b) => {
                let (x, y) = (self.ground(a), self.ground(b));
                if a.arity() != b.arity() {
                    return vec![B::F];
                }
                x.iter().zip(&y).map(|(&p, &q)| self.and(&[p, q])).collect()
            }
            Term::DotCap(a, b) => {
                let (x, y) = (self.ground(a), self.ground(b));
                let m = a.arity().max(b.arity());
                (0..pow(m)).map(|i| self.and(&[x[i % x.len()], y[i % y.len()]])).collect()
            }
            Term::OneDimCap(a, b) => {
                let (x, y) = (self.ground(a), self.ground(b));
                match (a.arity(), b.arity()) {
                    (1, 1) => x.iter().zip(&y).map(|(&p, &q)| self.and(&[p, q])).collect(),
                    (1, _) if b.arity() >= 2 => {
                        (0..y.len()).map(|i| self.and(&[y[i], x[i % n]])).collect()
                    }
                    (_, 1) if a.arity() >= 2 => {
                        (0..x.len()).map(|i| self.and(&[x[i], y[i % n]])).collect()
                    }
                    _ => vec![B::F],
                }
            }
            Term::Exists(a) => {
                let x = self.ground(a);
                if a.arity() == 0 {
                    return x;
                }
                (0..x.len() / n).map(|j| self.or(&x[j * n..(j + 1) * n])).collect()
            }
            Term::Exists1(a) => {
                let x = self.ground(a);
                if a.arity() < 2 {
                    return x;
                }
                let block = x.len() / n;
                (0..n).map(|j| self.or(&x[j * block..(j + 1) * block])).collect()
            }
            Term::Exists0(a) => {
                let x = self.ground(a);
                vec![self.or(&x)]
            }
            Term::Eq(a) => {
                let x = self.ground(a);
                if a.arity() < 2 {
                    return x;
                }
                (0..x.len()).map(|i| if i % n == (i / n) % n { x[i] } else { B::F }).collect()
            }
            Term::Subst(a) => {
                let x = self.ground(a);
                if a.arity() <= 1 {
                    return x;
                }
                (0..x.len() / n).map(|j| x[j * n + j % n]).collect()
            }
            Term::Swap(a) => {
                let x = self.ground(a);
                if a.arity() < 2 {
                    return x;
                }
                (0..x.len())
                    .map(|i| {
                        let (last, prev, rest) = (i % n, (i / n) % n, i / (n * n));
                        x[(rest * n + last) * n + prev]
                    })
                    .collect()
            }
            Term::Cyc(a) => {
                let x = self.ground(a);
                let k = a.arity();
                if k < 2 {
                    return x;
                }
                // Output ā = (rest, first) reads input (first, rest).
                let block = pow(k - 1);
                (0..x.len()).map(|i| x[(i % n) * block + i / n]).collect()
            }
            sugar => self.ground(&sugar.desugar()),
        }
    }

    pub fn solve(&mut self, deadline: Option<Instant>) -> SolveResult {
        self.solver.solve(deadline)
    }

    /// The structure encoded by the last satisfying assignment.
    pub fn model(&self) -> Structure {
        let mut vocab = Vocabulary::new();
        for (name, &(a, _)) in &self.atoms {
            // Names come from a validated vocabulary.
            let _ = vocab.add(name, a);
        }
        let mut s = Structure::new(self.n, &vocab);
        for (name, &(a, base)) in &self.atoms {
            let rel = ADRelation::from_fn(self.n, a, |i| self.solver.model_value(base + i as Var));
            s.set(name, rel);
        }
        s
    }

    /// Excludes the current model's facts from future solutions.
    pub fn block_model(&mut self) -> bool {
        let mut clause = Vec::new();
        for &(a, base) in self.atoms.values() {
            for i in 0..self.n.pow(a as u32) {
                let v = base + i as Var;
                clause.push(Lit::new(v, !self.solver.model_value(v)));
            }
        }
        self.solver.add_clause(&clause)
    }
}
