//! Exhaustive Kripke-model search for single-agent modal formulas.
//!
//! Every labeled frame on `1..=max_worlds` worlds and every valuation of the
//! occurring propositions is tried; forcing is computed as world bitmasks.

use std::collections::BTreeMap;

use serde::Serialize;

use super::modal::{Agent, ModalFormula};
use crate::error::{Error, Result};

/// Largest number of worlds the search accepts.
pub const MAX_WORLDS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeModel {
    pub worlds: usize,
    /// Successors of each world.
    pub access: Vec<Vec<usize>>,
    /// Worlds at which each proposition holds.
    pub valuation: BTreeMap<usize, Vec<usize>>,
    /// A world forcing the formula.
    pub root: usize,
}

impl KripkeModel {
    /// Whether `f` is forced at world `w`.
    pub fn forces(&self, f: &ModalFormula, w: usize) -> bool {
        match f {
            ModalFormula::Prop(i) => self.valuation.get(i).is_some_and(|ws| ws.contains(&w)),
            ModalFormula::Not(g) => !self.forces(g, w),
            ModalFormula::And(a, b) => self.forces(a, w) && self.forces(b, w),
            ModalFormula::Dia(_, g) => self.access[w].iter().any(|&v| self.forces(g, v)),
        }
    }

    pub fn is_serial(&self) -> bool {
        self.access.iter().all(|s| !s.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KripkeVerdict {
    Sat(KripkeModel),
    /// No model exists; the search covered the tree-model bound.
    Unsat,
    /// No model with at most `searched` worlds, which is below the tree-model bound.
    Unknown { searched: usize },
}

impl KripkeVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, KripkeVerdict::Sat(_))
    }
}

/// World count that suffices for every satisfiable formula: its tree model
/// has at most `max(1,m)ⁱ` worlds at depth `i`, where `m` is the number of
/// diamond subformulas. Seriality is kept by looping leaves to themselves.
pub fn tree_model_bound(f: &ModalFormula) -> usize {
    let m = f.diamonds().len().max(1);
    (0..=f.depth() as u32).map(|i| m.saturating_pow(i)).fold(0usize, usize::saturating_add)
}

enum Node {
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Dia(usize),
}

struct Compiled {
    nodes: Vec<Node>,
}

impl Compiled {
    fn new(f: &ModalFormula, props: &[usize]) -> Compiled {
        let subs = f.subformulas();
        let at = |g: &ModalFormula| subs.iter().position(|s| *s == g).expect("subformula");
        let nodes = subs
            .iter()
            .map(|g| match g {
                ModalFormula::Prop(i) => Node::Prop(props.iter().position(|p| p == i).expect("occurring")),
                ModalFormula::Not(x) => Node::Not(at(x)),
                ModalFormula::And(a, b) => Node::And(at(a), at(b)),
                ModalFormula::Dia(_, x) => Node::Dia(at(x)),
            })
            .collect();
        Compiled { nodes }
    }

    /// Mask of the worlds forcing the formula.
    fn eval(&self, access: &[u32], val: &[u32], full: u32, scratch: &mut Vec<u32>) -> u32 {
        scratch.clear();
        for node in &self.nodes {
            let m = match *node {
                Node::Prop(j) => val[j],
                Node::Not(x) => !scratch[x] & full,
                Node::And(a, b) => scratch[a] & scratch[b],
                Node::Dia(x) => {
                    let target = scratch[x];
                    access.iter().enumerate().fold(0, |m, (w, &s)| m | (((s & target) != 0) as u32) << w)
                }
            };
            scratch.push(m);
        }
        *scratch.last().expect("nonempty formula")
    }
}

/// Searches frames (serial ones when `serial` is set) with up to `max_worlds` worlds.
pub fn kripke_sat(f: &ModalFormula, max_worlds: usize, serial: bool) -> Result<KripkeVerdict> {
    if f.agents().iter().any(|&a| a != Agent::Single) {
        return Err(Error::Input("the Kripke search takes single-agent formulas".into()));
    }
    if max_worlds > MAX_WORLDS {
        return Err(Error::Input(format!("at most {MAX_WORLDS} worlds are searched, got {max_worlds}")));
    }
    let props: Vec<usize> = f.props().into_iter().collect();
    let compiled = Compiled::new(f, &props);
    let mut scratch = Vec::new();
    for n in 1..=max_worlds {
        let full = (1u32 << n) - 1;
        let first_row = if serial { 1 } else { 0 };
        let mut access = vec![first_row; n];
        let val_bits = n * props.len();
        loop {
            for v in 0u64..1 << val_bits {
                let val: Vec<u32> = (0..props.len()).map(|j| (v >> (j * n)) as u32 & full).collect();
                let forced = compiled.eval(&access, &val, full, &mut scratch);
                if forced != 0 {
                    let model = KripkeModel {
                        worlds: n,
                        access: access.iter().map(|&s| (0..n).filter(|&w| s >> w & 1 == 1).collect()).collect(),
                        valuation: props
                            .iter()
                            .zip(&val)
                            .map(|(&p, &m)| (p, (0..n).filter(|&w| m >> w & 1 == 1).collect()))
                            .collect(),
                        root: forced.trailing_zeros() as usize,
                    };
                    return Ok(KripkeVerdict::Sat(model));
                }
            }
            // Next frame in odometer order.
            let mut i = 0;
            while i < n && access[i] == full {
                access[i] = first_row;
                i += 1;
            }
            if i == n {
                break;
            }
            access[i] += 1;
        }
    }
    if max_worlds >= tree_model_bound(f) {
        Ok(KripkeVerdict::Unsat)
    } else {
        Ok(KripkeVerdict::Unknown { searched: max_worlds })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse(s: &str) -> ModalFormula {
        ModalFormula::parse(s).unwrap()
    }

    #[test]
    fn small_verdicts() {
        assert!(kripke_sat(&parse("dia p1"), 2, true).unwrap().is_sat());
        assert_eq!(kripke_sat(&parse("and box p1 dia not p1"), 3, true).unwrap(), KripkeVerdict::Unsat);
        assert_eq!(kripke_sat(&parse("and dia p1 box not p1"), 3, true).unwrap(), KripkeVerdict::Unsat);
    }

    #[test]
    fn seriality_matters() {
        let f = parse("box dia p1");
        assert!(kripke_sat(&parse("box not p1"), 1, false).unwrap().is_sat());
        let KripkeVerdict::Sat(m) = kripke_sat(&f, 2, true).unwrap() else { panic!() };
        assert!(m.is_serial());
        let dead_end = parse("box and p1 not p1");
        assert!(kripke_sat(&dead_end, 1, false).unwrap().is_sat());
        assert_eq!(kripke_sat(&dead_end, 3, true).unwrap(), KripkeVerdict::Unsat);
    }

    #[test]
    fn below_the_bound_is_unknown() {
        let f = parse("and and dia p1 dia p2 and not dia and p1 p2 box and p1 not p1");
        assert_eq!(kripke_sat(&f, 1, true).unwrap(), KripkeVerdict::Unknown { searched: 1 });
    }

    fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> ModalFormula {
        match rng.gen_range(0..if depth == 0 { 1 } else { 4 }) {
            0 => ModalFormula::prop(rng.gen_range(1..=2)),
            1 => ModalFormula::not(random_formula(rng, depth)),
            2 => ModalFormula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
            _ => ModalFormula::dia(Agent::Single, random_formula(rng, depth - 1)),
        }
    }

    #[test]
    fn found_models_force_the_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let f = random_formula(&mut rng, 3);
            if let KripkeVerdict::Sat(m) = kripke_sat(&f, 3, true).unwrap() {
                assert!(m.is_serial());
                assert!(m.forces(&f, m.root), "{f}");
            }
        }
    }
}
