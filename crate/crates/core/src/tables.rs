//! Canonical atom bases, k-tables, 1-types, kings and similarity of tuples.
//!
//! A GRA({I,s}) term built from a symbol `R` denotes `R(x∘π)` for a map π
//! from the positions of `R` to the positions of the tuple. Tables record the
//! truth of every such pattern.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::algebra::{Op, OpSet, Symbol, Vocabulary};
use crate::error::{Error, Result};
use crate::semantics::Structure;

/// `R(x_{map[0]+1}, ..., x_{map[ar R - 1]+1})` as a predicate on k-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomPattern {
    pub symbol: Symbol,
    pub map: Vec<usize>,
}

impl AtomPattern {
    pub fn holds(&self, s: &Structure, tuple: &[usize]) -> bool {
        let image: Vec<usize> = self.map.iter().map(|&i| tuple[i]).collect();
        s.get(&self.symbol.name).is_some_and(|r| r.contains(&image))
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<_> = self.map.iter().map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}({})", self.symbol.name, args.join(","))
    }
}

fn basis_ops(f: OpSet) -> OpSet {
    f.minus(OpSet::of(&[Op::Neg, Op::Cap, Op::Eq, Op::OneDimCap, Op::DotCap]))
}

fn check_basis_ops(f: OpSet) {
    assert!(
        f.is_subset(OpSet::of(&[Op::Subst, Op::Swap])),
        "table bases are defined for operator sets within {{I,s}}"
    );
}

/// Atom patterns of the k-ary GRA(F) terms over `vocab`, F ⊆ {I,s}.
///
/// Computed by closing each symbol's identity pattern under the operators and
/// keeping the patterns of arity `k`.
pub fn canonical_atoms(vocab: &Vocabulary, f: OpSet, k: usize) -> Vec<AtomPattern> {
    check_basis_ops(f);
    assert!(k >= 1, "tables are defined for k ≥ 1");
    let mut out = BTreeSet::new();
    for (name, arity) in vocab.iter() {
        let symbol = Symbol::new(name, arity);
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        // A state is (term arity m, π: positions of R → 0..m).
        let start = (arity, (0..arity).collect::<Vec<_>>());
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some((m, pi)) = queue.pop_front() {
            if m == k {
                out.insert(AtomPattern { symbol: symbol.clone(), map: pi.clone() });
            }
            let mut next = Vec::new();
            if f.contains(Op::Swap) && m >= 2 {
                let sw: Vec<usize> = pi
                    .iter()
                    .map(|&p| if p == m - 1 { m - 2 } else if p == m - 2 { m - 1 } else { p })
                    .collect();
                next.push((m, sw));
            }
            if f.contains(Op::Subst) && m >= 2 {
                let sub: Vec<usize> = pi.iter().map(|&p| if p == m - 1 { m - 2 } else { p }).collect();
                next.push((m - 1, sub));
            }
            for st in next {
                if seen.insert(st.clone()) {
                    queue.push_back(st);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Position maps at which subterms of a k-ary GRA(F) term are evaluated,
/// starting from the identity on `0..k`.
pub fn reachable_maps(f: OpSet, k: usize, max_arity: usize) -> Vec<Vec<usize>> {
    let start: Vec<usize> = (0..k).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(mu) = queue.pop_front() {
        let m = mu.len();
        let mut next = Vec::new();
        if f.contains(Op::Swap) && m >= 2 {
            let mut sw = mu.clone();
            sw.swap(m - 2, m - 1);
            next.push(sw);
        }
        if f.contains(Op::Subst) && m >= 1 && m < max_arity {
            let mut ext = mu.clone();
            ext.push(mu[m - 1]);
            next.push(ext);
        }
        if f.contains(Op::DotCap) {
            for j in 1..m {
                next.push(mu[m - j..].to_vec());
            }
        }
        if f.contains(Op::OneDimCap) && m >= 2 {
            next.push(vec![mu[m - 1]]);
        }
        for nu in next {
            if seen.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    seen.into_iter().collect()
}

/// The k-table of a tuple: truth of every canonical atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    pub ops: OpSet,
    pub atoms: Vec<AtomPattern>,
    pub values: Vec<bool>,
}

impl Table {
    pub fn arity(&self) -> usize {
        self.atoms.first().map_or(0, |a| a.map.iter().max().map_or(0, |m| m + 1))
    }

    pub fn get(&self, atom: &AtomPattern) -> Option<bool> {
        self.atoms.iter().position(|a| a == atom).map(|i| self.values[i])
    }

    /// Deterministic text dump, one `atom=0|1` per line.
    pub fn dump(&self) -> String {
        self.atoms
            .iter()
            .zip(&self.values)
            .map(|(a, &v)| format!("{a}={}\n", u8::from(v)))
            .collect()
    }
}

pub fn table_of(s: &Structure, tuple: &[usize], f: OpSet) -> Table {
    let f = basis_ops(f);
    let atoms = canonical_atoms(&s.vocabulary(), f, tuple.len());
    let values = atoms.iter().map(|a| a.holds(s, tuple)).collect();
    Table { ops: f, atoms, values }
}

/// The 1-table of an element.
pub fn one_type(s: &Structure, element: usize, f: OpSet) -> Table {
    table_of(s, &[element], f)
}

/// True iff no other element realizes the same 1-type.
pub fn is_king(s: &Structure, element: usize, f: OpSet) -> bool {
    let own = one_type(s, element, f);
    (0..s.domain()).filter(|&b| b != element).all(|b| one_type(s, b, f) != own)
}

const SIMILARITY_OPS: OpSet =
    OpSet::of(&[Op::Subst, Op::Swap, Op::Eq, Op::Neg, Op::OneDimCap, Op::Cap, Op::DotCap]);

fn signature(s: &Structure, tuple: &[usize], f: OpSet, maps: &[Vec<usize>]) -> Vec<bool> {
    let mut bits = Vec::new();
    for mu in maps {
        let image: Vec<usize> = mu.iter().map(|&i| tuple[i]).collect();
        for (_, rel) in s.relations() {
            if rel.arity() == image.len() {
                bits.push(rel.contains(&image));
            }
        }
        if f.contains(Op::Eq) && image.len() >= 2 {
            bits.push(image[image.len() - 2] == image[image.len() - 1]);
        }
    }
    bits
}

/// Whether `a` in `sa` and `b` in `sb` satisfy the same k-ary GRA(F) terms.
///
/// Supported for F ⊆ {I,s,E,¬,C,∩,⋅∩}; when E, C or ⋅∩ is present, ¬ and ∩
/// must be too.
pub fn similar(sa: &Structure, a: &[usize], sb: &Structure, b: &[usize], f: OpSet) -> Result<bool> {
    if !f.is_subset(SIMILARITY_OPS) {
        return Err(Error::UnsupportedSimilarity(f.to_string()));
    }
    let needs_boolean = f.contains(Op::Eq) || f.contains(Op::OneDimCap) || f.contains(Op::DotCap);
    if needs_boolean && !(f.contains(Op::Neg) && f.contains(Op::Cap)) {
        return Err(Error::UnsupportedSimilarity(f.to_string()));
    }
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Input("similarity compares nonempty tuples of equal length".into()));
    }
    if sa.vocabulary() != sb.vocabulary() {
        return Err(Error::Input("similarity compares structures over one vocabulary".into()));
    }
    let max_arity = sa.vocabulary().max_arity();
    let maps = reachable_maps(f, a.len(), max_arity);
    Ok(signature(sa, a, f, &maps) == signature(sb, b, f, &maps))
}
