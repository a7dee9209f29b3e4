//! Translation of S5² into GRA(¬,∩,∃,s).
//!
//! A world of a product model is a pair `(a, b)`. The first modality moves
//! along the second coordinate and the second modality along the first, so
//! every subformula is a binary relation and each diamond `◊ᵢψ` becomes a
//! fresh symbol constrained to hold at `(a, b)` exactly when `ψ` holds
//! somewhere on the corresponding line.

use super::modal::{Agent, ModalFormula};
use crate::algebra::{Term, Vocabulary};
use crate::error::{Error, Result};

pub fn proposition_symbol(prop: usize) -> String {
    format!("P_{prop}")
}

fn diamond_symbol(agent: Agent, index: usize) -> String {
    let a = if agent == Agent::First { 1 } else { 2 };
    format!("S_dia{a}_{index}")
}

struct Translation<'a> {
    diamonds: Vec<&'a ModalFormula>,
}

impl Translation<'_> {
    fn symbol(&self, d: &ModalFormula) -> Term {
        let i = self.diamonds.iter().position(|x| *x == d).expect("enumerated diamond");
        let ModalFormula::Dia(agent, _) = d else { unreachable!("diamonds only") };
        Term::rel(&diamond_symbol(*agent, i), 2)
    }

    fn term(&self, f: &ModalFormula) -> Term {
        match f {
            ModalFormula::Prop(i) => Term::rel(&proposition_symbol(*i), 2),
            ModalFormula::Not(g) => Term::not(self.term(g)),
            ModalFormula::And(a, b) => Term::cap(self.term(a), self.term(b)),
            ModalFormula::Dia(..) => self.symbol(f),
        }
    }

    /// `S` holds somewhere on a line iff `ψ` does, and then on the whole line.
    fn constraint(&self, d: &ModalFormula) -> Term {
        let ModalFormula::Dia(agent, body) = d else { unreachable!("diamonds only") };
        let (s, t) = match agent {
            Agent::First => (self.symbol(d), self.term(body)),
            _ => (Term::swap(self.symbol(d)), Term::swap(self.term(body))),
        };
        Term::all(Term::cap(
            Term::cup(Term::not(Term::ex(s.clone())), Term::ex(t.clone())),
            Term::cup(Term::not(Term::ex(t)), Term::all(s)),
        ))
    }
}

/// Translates a two-agent formula to a sentence satisfiable exactly when the
/// formula is S5²-satisfiable.
pub fn s52_to_term(f: &ModalFormula) -> Result<(Term, Vocabulary)> {
    if f.agents().contains(&Agent::Single) {
        return Err(Error::Input("single-agent formula; use the serial modal translation".into()));
    }
    let tr = Translation { diamonds: f.diamonds() };
    let mut symbols: Vec<String> = f.props().into_iter().map(proposition_symbol).collect();
    for (i, d) in tr.diamonds.iter().enumerate() {
        let ModalFormula::Dia(agent, _) = d else { unreachable!("diamonds only") };
        symbols.push(diamond_symbol(*agent, i));
    }
    let vocab = Vocabulary::from_pairs(symbols.iter().map(|n| (n.as_str(), 2)))?;
    let mut parts = vec![Term::ex(Term::ex(tr.term(f)))];
    let (first, second): (Vec<_>, Vec<_>) =
        tr.diamonds.iter().partition(|d| matches!(d, ModalFormula::Dia(Agent::First, _)));
    parts.extend(first.into_iter().chain(second).map(|d| tr.constraint(d)));
    Ok((Term::fold(parts, Term::cap).expect("nonempty"), vocab))
}
