//! Encoding of the ℕ×ℕ tiling problem in GRA(s,¬,⋅∩,∃).
//!
//! A pair `(a, b)` is a grid cell and `P_t` marks its tile. For each `a` a
//! successor `c` is chosen with `TH_t(a,c,·)` carrying the tile of `(a,·)`
//! to the horizontal neighbour `(c,·)` and `TV_t` doing the same vertically.

use serde::{Deserialize, Serialize};

use crate::algebra::{Term, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    #[serde(rename = "r")]
    pub right: String,
    #[serde(rename = "l")]
    pub left: String,
    #[serde(rename = "t")]
    pub top: String,
    #[serde(rename = "b")]
    pub bottom: String,
}

impl Tile {
    pub fn new(right: &str, left: &str, top: &str, bottom: &str) -> Tile {
        Tile { right: right.into(), left: left.into(), top: top.into(), bottom: bottom.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TileSet {
    pub tiles: Vec<Tile>,
}

impl TileSet {
    /// Reads `[{"r": .., "l": .., "t": .., "b": ..}, ..]`.
    pub fn from_json(text: &str) -> Result<TileSet> {
        let set: TileSet = serde_json::from_str(text)?;
        if set.tiles.is_empty() {
            return Err(Error::Input("empty tile set".into()));
        }
        Ok(set)
    }
}

fn sym(prefix: &str, t: usize, arity: usize) -> Term {
    Term::rel(&format!("{prefix}_{t}"), arity)
}

pub fn tiling_vocabulary(tiles: &TileSet) -> Result<Vocabulary> {
    let mut pairs = Vec::new();
    for t in 0..tiles.tiles.len() {
        pairs.push((format!("P_{t}"), 2));
        pairs.push((format!("TH_{t}"), 3));
        pairs.push((format!("TV_{t}"), 3));
    }
    Vocabulary::from_pairs(pairs.iter().map(|(n, a)| (n.as_str(), *a)))
}

fn union(items: Vec<Term>) -> Term {
    Term::fold(items, Term::dotcup).unwrap_or(Term::Bot)
}

fn intersection(items: Vec<Term>) -> Term {
    Term::fold(items, Term::dotcap).unwrap_or(Term::Top)
}

/// The five conjuncts of the encoding, by name.
pub fn tiling_conjuncts(tiles: &TileSet) -> Result<Vec<(&'static str, Term)>> {
    let ts = &tiles.tiles;
    if ts.is_empty() {
        return Err(Error::Input("empty tile set".into()));
    }
    let n = ts.len();
    let all2 = |t: Term| Term::all(Term::all(t));
    let some_tile = all2(union((0..n).map(|t| sym("P", t, 2)).collect()));
    let mut distinct = Vec::new();
    for t in 0..n {
        for u in t + 1..n {
            distinct.push(Term::not(Term::dotcap(sym("P", t, 2), sym("P", u, 2))));
        }
    }
    let one_tile = all2(intersection(distinct));
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for (t, a) in ts.iter().enumerate() {
        for (u, b) in ts.iter().enumerate() {
            if a.right == b.left {
                horizontal.push(Term::dotcap(sym("P", u, 2), sym("TH", t, 3)));
            }
            if a.top == b.bottom {
                vertical.push(Term::dotcap(Term::swap(sym("P", u, 2)), sym("TV", t, 3)));
            }
        }
    }
    let neighbours =
        Term::all(Term::ex(Term::all(Term::dotcap(union(horizontal), union(vertical)))));
    let carry = |rel: &str, swap_tile: bool| {
        all2(intersection(
            (0..n)
                .map(|t| {
                    let p = sym("P", t, 2);
                    let p = if swap_tile { Term::swap(p) } else { p };
                    Term::dotcup(Term::not(Term::ex(Term::swap(sym(rel, t, 3)))), p)
                })
                .collect(),
        ))
    };
    Ok(vec![
        ("some tile", some_tile),
        ("one tile", one_tile),
        ("neighbours", neighbours),
        ("horizontal carry", carry("TH", false)),
        ("vertical carry", carry("TV", true)),
    ])
}

/// The encoding `Γ_T` of a tile set, with its vocabulary.
pub fn tiling_to_term(tiles: &TileSet) -> Result<(Term, Vocabulary)> {
    let parts = tiling_conjuncts(tiles)?.into_iter().map(|c| c.1).collect();
    Ok((Term::fold(parts, Term::dotcap).expect("five conjuncts"), tiling_vocabulary(tiles)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{operators_used, Op, OpSet};
    use crate::gen::random_structure;
    use crate::semantics::{eval_fo, parse_fo, satisfied, Fo};
    use crate::solvers::{brute_force_sat, check_no_finite_model_upto};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn disj(items: Vec<String>) -> String {
        if items.is_empty() {
            "false".into()
        } else {
            format!("({})", items.join(" | "))
        }
    }

    fn conj(items: Vec<String>) -> String {
        if items.is_empty() {
            "true".into()
        } else {
            format!("({})", items.join(" & "))
        }
    }

    /// The conjuncts as first-order sentences.
    fn formulas(ts: &[Tile]) -> Vec<Fo> {
        let n = ts.len();
        let mut h = Vec::new();
        let mut v = Vec::new();
        for (t, a) in ts.iter().enumerate() {
            for (u, b) in ts.iter().enumerate() {
                if a.right == b.left {
                    h.push(format!("(TH_{t}(v1,v2,v3) & P_{u}(v2,v3))"));
                }
                if a.top == b.bottom {
                    v.push(format!("(TV_{t}(v1,v2,v3) & P_{u}(v3,v2))"));
                }
            }
        }
        let mut distinct = Vec::new();
        for t in 0..n {
            for u in t + 1..n {
                distinct.push(format!("~(P_{t}(v1,v2) & P_{u}(v1,v2))"));
            }
        }
        let srcs = [
            format!("all v1 all v2 {}", disj((0..n).map(|t| format!("P_{t}(v1,v2)")).collect())),
            format!("all v1 all v2 {}", conj(distinct)),
            format!("all v1 ex v2 all v3 ({} & {})", disj(h), disj(v)),
            format!(
                "all v1 all v3 {}",
                conj((0..n).map(|t| format!("(~ex v2 TH_{t}(v1,v2,v3) | P_{t}(v1,v3))")).collect())
            ),
            format!(
                "all v1 all v3 {}",
                conj((0..n).map(|t| format!("(~ex v2 TV_{t}(v1,v2,v3) | P_{t}(v3,v1))")).collect())
            ),
        ];
        srcs.iter().map(|s| parse_fo(s).unwrap()).collect()
    }

    fn sample_sets() -> Vec<TileSet> {
        vec![
            TileSet { tiles: vec![Tile::new("a", "a", "b", "b")] },
            TileSet { tiles: vec![Tile::new("a", "b", "c", "c")] },
            TileSet { tiles: vec![Tile::new("a", "b", "c", "c"), Tile::new("b", "a", "c", "d")] },
            TileSet {
                tiles: vec![Tile::new("x", "x", "y", "z"), Tile::new("x", "y", "z", "y"), Tile::new("y", "x", "y", "y")],
            },
        ]
    }

    #[test]
    fn conjuncts_match_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for set in sample_sets() {
            let v = tiling_vocabulary(&set).unwrap();
            let terms = tiling_conjuncts(&set).unwrap();
            let fos = formulas(&set.tiles);
            for i in 0..150 {
                let density = [0.3, 0.6, 0.9][i % 3];
                let s = random_structure(&mut rng, &v, 1 + i % 3, density);
                for ((name, t), f) in terms.iter().zip(&fos) {
                    assert_eq!(satisfied(&s, t).unwrap(), eval_fo(f, &s, &BTreeMap::new()).unwrap(), "{name}");
                }
            }
        }
    }

    #[test]
    fn uniform_tile_has_a_small_model() {
        let set = TileSet::from_json(r#"[{"r":"a","l":"a","t":"b","b":"b"}]"#).unwrap();
        let (t, _) = tiling_to_term(&set).unwrap();
        assert!(brute_force_sat(&t, 2).unwrap().is_sat());
        let ops = operators_used(&t.desugar());
        assert!(ops.is_subset(OpSet::of(&[Op::Swap, Op::Neg, Op::DotCap, Op::Exists])));
        assert!(ops.contains(Op::Swap));
    }

    #[test]
    fn mismatched_sides_have_no_small_model() {
        let set = TileSet { tiles: vec![Tile::new("a", "b", "c", "c")] };
        let (t, _) = tiling_to_term(&set).unwrap();
        assert!(check_no_finite_model_upto(&t, 2).unwrap());
    }

    #[test]
    fn rejects_empty_sets() {
        assert!(TileSet::from_json("[]").is_err());
        assert!(tiling_to_term(&TileSet { tiles: vec![] }).is_err());
    }
}
