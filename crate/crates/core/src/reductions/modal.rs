//! Modal formulas and the translation of serial modal logic into GRA(¬,∩,∃).
//!
//! A formula at modal depth `k` is read at a `k`-tuple whose last element is
//! the current world: `t_k(p_i) = R_i_k`, `t_k(◊ψ) = ∃t_{k+1}(ψ)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{Term, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Agent {
    /// The modality of single-agent modal logic.
    Single,
    /// The first modality of S5².
    First,
    /// The second modality of S5².
    Second,
}

impl Agent {
    fn keyword(self) -> &'static str {
        match self {
            Agent::Single => "dia",
            Agent::First => "dia1",
            Agent::Second => "dia2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    Prop(usize),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Dia(Agent, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn prop(i: usize) -> Self {
        ModalFormula::Prop(i)
    }

    pub fn not(f: Self) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        ModalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    pub fn dia(agent: Agent, f: Self) -> Self {
        ModalFormula::Dia(agent, Box::new(f))
    }

    /// `□ψ` as `¬◊¬ψ`.
    pub fn boxed(agent: Agent, f: Self) -> Self {
        Self::not(Self::dia(agent, Self::not(f)))
    }

    pub fn depth(&self) -> usize {
        match self {
            ModalFormula::Prop(_) => 0,
            ModalFormula::Not(f) => f.depth(),
            ModalFormula::And(a, b) => a.depth().max(b.depth()),
            ModalFormula::Dia(_, f) => 1 + f.depth(),
        }
    }

    pub fn props(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let ModalFormula::Prop(i) = f {
                out.insert(*i);
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let ModalFormula::Dia(a, _) = f {
                out.insert(*a);
            }
        });
        out
    }

    /// Postorder traversal.
    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ModalFormula)) {
        match self {
            ModalFormula::Prop(_) => {}
            ModalFormula::Not(g) | ModalFormula::Dia(_, g) => g.visit(f),
            ModalFormula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
        f(self);
    }

    /// Distinct subformulas in order of first postorder occurrence.
    pub fn subformulas(&self) -> Vec<&ModalFormula> {
        let mut out: Vec<&ModalFormula> = Vec::new();
        self.visit(&mut |g| {
            if !out.contains(&g) {
                out.push(g);
            }
        });
        out
    }

    /// Distinct diamond subformulas in order of first postorder occurrence.
    pub fn diamonds(&self) -> Vec<&ModalFormula> {
        self.subformulas().into_iter().filter(|g| matches!(g, ModalFormula::Dia(..))).collect()
    }

    /// Parses prefix notation: `p1`, `not φ`, `and φ ψ`, `or φ ψ`, `dia φ`,
    /// `box φ`, and `dia1`, `dia2`, `box1`, `box2` for S5². Parentheses are
    /// allowed for grouping and otherwise ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let spaced = text.replace(['(', ')'], " ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let f = parse_prefix(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Input(format!("trailing input after modal formula: `{}`", tokens[pos..].join(" "))));
        }
        Ok(f)
    }
}

fn parse_prefix(tokens: &[&str], pos: &mut usize) -> Result<ModalFormula> {
    let Some(&tok) = tokens.get(*pos) else {
        return Err(Error::Input("unexpected end of modal formula".into()));
    };
    *pos += 1;
    let mut next = || parse_prefix(tokens, pos);
    Ok(match tok {
        "not" => ModalFormula::not(next()?),
        "and" => ModalFormula::and(next()?, next()?),
        "or" => ModalFormula::or(next()?, next()?),
        "dia" => ModalFormula::dia(Agent::Single, next()?),
        "dia1" => ModalFormula::dia(Agent::First, next()?),
        "dia2" => ModalFormula::dia(Agent::Second, next()?),
        "box" => ModalFormula::boxed(Agent::Single, next()?),
        "box1" => ModalFormula::boxed(Agent::First, next()?),
        "box2" => ModalFormula::boxed(Agent::Second, next()?),
        _ => match tok.strip_prefix('p').and_then(|d| d.parse::<usize>().ok()) {
            Some(i) => ModalFormula::Prop(i),
            None => return Err(Error::Input(format!("unknown modal token `{tok}`"))),
        },
    })
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::Prop(i) => write!(f, "p{i}"),
            ModalFormula::Not(g) => write!(f, "not {g}"),
            ModalFormula::And(a, b) => write!(f, "and {a} {b}"),
            ModalFormula::Dia(a, g) => write!(f, "{} {g}", a.keyword()),
        }
    }
}

pub fn modal_symbol(prop: usize, level: usize) -> String {
    format!("R_{prop}_{level}")
}

fn translate(f: &ModalFormula, k: usize) -> Term {
    match f {
        ModalFormula::Prop(i) => Term::rel(&modal_symbol(*i, k), k),
        ModalFormula::Not(g) => Term::not(translate(g, k)),
        ModalFormula::And(a, b) => Term::cap(translate(a, k), translate(b, k)),
        ModalFormula::Dia(_, g) => Term::ex(translate(g, k + 1)),
    }
}

/// Translates a single-agent formula to a sentence satisfiable exactly when
/// the formula is satisfiable over serial frames.
pub fn modal_to_term(f: &ModalFormula) -> Result<(Term, Vocabulary)> {
    if f.agents().iter().any(|&a| a != Agent::Single) {
        return Err(Error::Input("two-agent formula; use the S5² translation".into()));
    }
    let mut symbols = Vec::new();
    for i in f.props() {
        for k in 1..=f.depth() + 1 {
            symbols.push((modal_symbol(i, k), k));
        }
    }
    let vocab = Vocabulary::from_pairs(symbols.iter().map(|(n, a)| (n.as_str(), *a)))?;
    Ok((Term::ex(translate(f, 1)), vocab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_term;

    #[test]
    fn parses_and_prints() {
        let f = ModalFormula::parse("and dia p1 (box not p2)").unwrap();
        assert_eq!(f.depth(), 1);
        assert_eq!(f.props(), BTreeSet::from([1, 2]));
        assert_eq!(ModalFormula::parse(&f.to_string()).unwrap(), f);
        assert!(ModalFormula::parse("and p1").is_err());
        assert!(ModalFormula::parse("p1 p2").is_err());
        assert!(ModalFormula::parse("q1").is_err());
    }

    #[test]
    fn diamond_translation() {
        let (t, v) = modal_to_term(&ModalFormula::parse("dia p1").unwrap()).unwrap();
        assert_eq!(t, parse_term("ex ex R_1_2", &v).unwrap());
        assert_eq!(v.arity("R_1_1"), Some(1));
        let (t, v) = modal_to_term(&ModalFormula::parse("and p1 not p1").unwrap()).unwrap();
        assert_eq!(t, parse_term("ex (R_1_1 cap not R_1_1)", &v).unwrap());
    }

    #[test]
    fn rejects_two_agents() {
        assert!(modal_to_term(&ModalFormula::parse("dia1 p1").unwrap()).is_err());
    }

    #[test]
    fn diamond_enumeration_is_stable() {
        let f = ModalFormula::parse("and dia1 p1 and dia2 not p1 dia1 p1").unwrap();
        let d = f.diamonds();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].to_string(), "dia1 p1");
        assert_eq!(d[1].to_string(), "dia2 not p1");
    }
}
