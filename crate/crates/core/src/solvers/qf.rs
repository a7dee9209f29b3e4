//! Quantifier-free terms compiled for evaluation on tuple views.
//!
//! A view of a tuple `ā = (a₁..a_k)` records whether `a_{k−1} = a_k` and, for
//! every symbol `R` with `ar R ≥ k`, the fact `R(ā·a_kʲ)` with `j = ar R − k`.
//! Terms over `{I, E, ¬, ∩}` are determined by the view of the tuple they are
//! evaluated at.

use crate::algebra::{Term, Vocabulary};
use crate::error::{Error, Result};

/// Symbols of a vocabulary numbered for use as bit positions.
#[derive(Clone, Debug)]
pub(crate) struct SymbolIndex {
    symbols: Vec<(String, usize)>,
}

impl SymbolIndex {
    pub fn new(vocab: &Vocabulary) -> Result<Self> {
        let symbols: Vec<(String, usize)> = vocab.iter().map(|(n, a)| (n.to_string(), a)).collect();
        if symbols.len() > 64 {
            return Err(Error::Input(format!(
                "{} relation symbols exceed the solver limit of 64",
                symbols.len()
            )));
        }
        Ok(SymbolIndex { symbols })
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, usize)> + '_ {
        self.symbols.iter().enumerate().map(|(i, (n, a))| (i, n.as_str(), *a))
    }

    /// Bit mask of the symbols satisfying `pred` on their arity.
    pub fn mask(&self, pred: impl Fn(usize) -> bool) -> u64 {
        self.iter().filter(|&(_, _, a)| pred(a)).fold(0, |m, (i, _, _)| m | 1 << i)
    }
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Const(bool),
    Atom(u8),
    Not(u32),
    And(u32, u32),
    Eq(u32),
    Subst(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct Qf {
    nodes: Vec<Node>,
    root: u32,
    arity: usize,
}

impl Qf {
    /// Compiles a quantifier-free term over `{I, E, ¬, ∩}`.
    pub fn compile(t: &Term, index: &SymbolIndex) -> Result<Qf> {
        let mut nodes = Vec::new();
        let (root, arity) = Self::build(&t.desugar(), index, &mut nodes)?;
        Ok(Qf { nodes, root, arity })
    }

    fn build(t: &Term, index: &SymbolIndex, nodes: &mut Vec<Node>) -> Result<(u32, usize)> {
        let (node, arity) = match t {
            Term::Top => (Node::Const(true), 0),
            Term::Bot => (Node::Const(false), 0),
            Term::Rel(s) => {
                let i = index.position(&s.name).ok_or_else(|| Error::Undeclared(s.name.to_string()))?;
                (Node::Atom(i as u8), s.arity)
            }
            Term::Neg(x) => {
                let (c, a) = Self::build(x, index, nodes)?;
                (Node::Not(c), a)
            }
            Term::Cap(x, y) => {
                let (c, a) = Self::build(x, index, nodes)?;
                let (d, b) = Self::build(y, index, nodes)?;
                if a == b {
                    (Node::And(c, d), a)
                } else {
                    (Node::Const(false), 0)
                }
            }
            Term::Eq(x) => {
                let (c, a) = Self::build(x, index, nodes)?;
                if a >= 2 {
                    (Node::Eq(c), a)
                } else {
                    return Ok((c, a));
                }
            }
            Term::Subst(x) => {
                let (c, a) = Self::build(x, index, nodes)?;
                if a >= 2 {
                    (Node::Subst(c), a - 1)
                } else {
                    return Ok((c, a));
                }
            }
            other => {
                return Err(Error::Fragment {
                    found: other.to_string(),
                    expected: "quantifier-free terms over {I,E,¬,∩}".into(),
                })
            }
        };
        nodes.push(node);
        Ok((nodes.len() as u32 - 1, arity))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Value at a tuple with the given view.
    pub fn eval(&self, eq: bool, bits: u64) -> bool {
        self.at(self.root, eq, bits)
    }

    fn at(&self, i: u32, eq: bool, bits: u64) -> bool {
        match self.nodes[i as usize] {
            Node::Const(b) => b,
            Node::Atom(s) => bits >> s & 1 == 1,
            Node::Not(c) => !self.at(c, eq, bits),
            Node::And(c, d) => self.at(c, eq, bits) && self.at(d, eq, bits),
            Node::Eq(c) => eq && self.at(c, eq, bits),
            Node::Subst(c) => self.at(c, true, bits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_term;
    use crate::gen::TermGen;
    use crate::algebra::{Op, OpSet};
    use crate::semantics::{evaluate, Structure};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The view of `tuple` in `s`, read off the structure directly.
    fn view(s: &Structure, index: &SymbolIndex, tuple: &[usize]) -> (bool, u64) {
        let k = tuple.len();
        let eq = k >= 2 && tuple[k - 2] == tuple[k - 1];
        let mut bits = 0;
        for (i, name, a) in index.iter() {
            if a >= k {
                let mut t = tuple.to_vec();
                t.resize(a, tuple[k - 1]);
                if s.get(name).is_some_and(|r| r.contains(&t)) {
                    bits |= 1 << i;
                }
            }
        }
        (eq, bits)
    }

    #[test]
    fn agrees_with_the_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vocab = Vocabulary::parse("P/1, R/2, T/3").unwrap();
        let index = SymbolIndex::new(&vocab).unwrap();
        let g = TermGen::new(&vocab, OpSet::of(&[Op::Subst, Op::Eq, Op::Neg, Op::Cap]));
        for _ in 0..300 {
            let k = rng.gen_range(1..=3);
            let Some(t) = g.term(&mut rng, k, 4) else { continue };
            let q = Qf::compile(&t, &index).unwrap();
            let s = crate::gen::random_structure(&mut rng, &vocab, 3, 0.5);
            let rel = evaluate(&t, &s);
            for tuple in (0..rel.capacity()).map(|i| rel.tuple_at(i)) {
                let (eq, bits) = view(&s, &index, &tuple);
                assert_eq!(q.eval(eq, bits), rel.contains(&tuple), "{t} at {tuple:?}");
            }
        }
    }

    #[test]
    fn rejects_quantifiers() {
        let vocab = Vocabulary::parse("R/2").unwrap();
        let index = SymbolIndex::new(&vocab).unwrap();
        assert!(Qf::compile(&parse_term("ex R", &vocab).unwrap(), &index).is_err());
    }
}
