//! Grid axioms in GRA(p,¬,⋅∩,∃₁,∃₀).
//!
//! Over `R, U, L, D/2` and `S/4` the sentences say that every element has a
//! right and an up successor, that `L` and `D` are the inverses of `R` and
//! `U`, that `S` contains every left-up-right path, and that the end of such
//! a path lies directly above its start. Together they imply that the grid
//! squares close.

use rand::Rng;

use crate::algebra::{parse_term, Term, Vocabulary};
use crate::semantics::{parse_fo, Fo, Structure};

pub const VOCABULARY: &str = "R/2, U/2, L/2, D/2, S/4";

pub fn grid_vocabulary() -> Vocabulary {
    Vocabulary::parse(VOCABULARY).expect("fixed vocabulary")
}

const TERMS: [(&str, &str); 7] = [
    ("successor", "all0 (ex1 R dotcap ex1 U)"),
    ("inverse R", "all0 all1 (not R dotcup p L)"),
    ("inverse L", "all0 all1 (not L dotcup p R)"),
    ("inverse U", "all0 all1 (not U dotcup p D)"),
    ("inverse D", "all0 all1 (not D dotcup p U)"),
    ("cycle", "all0 p p (not L dotcup p p p (not U dotcup p p p (not R dotcup S)))"),
    ("completion", "all0 p p p (p not S dotcup D)"),
];

const FORMULAS: [(&str, &str); 7] = [
    ("successor", "all v1 (ex v2 R(v1,v2) & ex v2 U(v1,v2))"),
    ("inverse R", "all v1 all v2 (R(v1,v2) -> L(v2,v1))"),
    ("inverse L", "all v1 all v2 (L(v1,v2) -> R(v2,v1))"),
    ("inverse U", "all v1 all v2 (U(v1,v2) -> D(v2,v1))"),
    ("inverse D", "all v1 all v2 (D(v1,v2) -> U(v2,v1))"),
    (
        "cycle",
        "all v1 all v2 all v3 all v4 ((L(v1,v2) & U(v2,v3) & R(v3,v4)) -> S(v1,v2,v3,v4))",
    ),
    ("completion", "all v1 all v2 all v3 all v4 (S(v1,v2,v3,v4) -> D(v4,v1))"),
];

/// The grid axioms as named terms.
pub fn grid_terms() -> Vec<(&'static str, Term)> {
    let v = grid_vocabulary();
    TERMS.iter().map(|&(n, src)| (n, parse_term(src, &v).expect("fixed term"))).collect()
}

/// The same axioms as first-order sentences.
pub fn grid_formulas() -> Vec<(&'static str, Fo)> {
    FORMULAS.iter().map(|&(n, src)| (n, parse_fo(src).expect("fixed formula"))).collect()
}

/// Conjunction of the grid axioms.
pub fn grid_sentence() -> Term {
    Term::fold(grid_terms().into_iter().map(|t| t.1).collect(), Term::dotcap).expect("nonempty")
}

/// `R(v₁,v₂) ∧ U(v₁,v₃) ∧ R(v₃,v₄) → U(v₂,v₄)`.
pub fn grid_like() -> Fo {
    parse_fo("all v1 all v2 all v3 all v4 ((R(v1,v2) & U(v1,v3) & R(v3,v4)) -> U(v2,v4))").expect("fixed formula")
}

/// A random structure satisfying the inverse, cycle and completion axioms.
///
/// `R` and `U` are drawn at random, then `U` is closed under the completion
/// axiom, which may create further paths.
pub fn random_grid_like_structure<G: Rng>(rng: &mut G, n: usize, density: f64) -> Structure {
    let mut r = vec![vec![false; n]; n];
    let mut u = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            r[a][b] = rng.gen_bool(density);
            u[a][b] = rng.gen_bool(density);
        }
    }
    let paths = |r: &Vec<Vec<bool>>, u: &Vec<Vec<bool>>| {
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if r[b][a] && u[b][c] && r[c][d] {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    };
    loop {
        let mut changed = false;
        for [a, _, _, d] in paths(&r, &u) {
            if !u[a][d] {
                u[a][d] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut s = Structure::new(n, &grid_vocabulary());
    for a in 0..n {
        for b in 0..n {
            if r[a][b] {
                s.get_mut("R").expect("declared").insert(&[a, b]);
                s.get_mut("L").expect("declared").insert(&[b, a]);
            }
            if u[a][b] {
                s.get_mut("U").expect("declared").insert(&[a, b]);
                s.get_mut("D").expect("declared").insert(&[b, a]);
            }
        }
    }
    for t in paths(&r, &u) {
        s.get_mut("S").expect("declared").insert(&t);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{operators_used, Op, OpSet};
    use crate::gen::random_structure;
    use crate::semantics::{eval_fo, satisfied};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn terms_match_formulas() {
        let v = grid_vocabulary();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let terms = grid_terms();
        let formulas = grid_formulas();
        for i in 0..300 {
            let n = 1 + i % 3;
            let s = random_structure(&mut rng, &v, n, if i % 2 == 0 { 0.5 } else { 0.9 });
            for ((name, t), (_, f)) in terms.iter().zip(&formulas) {
                assert_eq!(satisfied(&s, t).unwrap(), eval_fo(f, &s, &BTreeMap::new()).unwrap(), "{name}");
            }
        }
    }

    /// The 2×2 torus: cell `(i,j)` is element `2j+i`.
    fn torus() -> Structure {
        let cell = |i: usize, j: usize| 2 * (j % 2) + i % 2;
        let mut s = Structure::new(4, &grid_vocabulary());
        for i in 0..2 {
            for j in 0..2 {
                let (a, right, up) = (cell(i, j), cell(i + 1, j), cell(i, j + 1));
                s.get_mut("R").unwrap().insert(&[a, right]);
                s.get_mut("L").unwrap().insert(&[right, a]);
                s.get_mut("U").unwrap().insert(&[a, up]);
                s.get_mut("D").unwrap().insert(&[up, a]);
            }
        }
        let get = |s: &Structure, r: &str, a: usize, b: usize| s.get(r).unwrap().contains(&[a, b]);
        let mut paths = Vec::new();
        for t in (0..256).map(|x| [x & 3, x >> 2 & 3, x >> 4 & 3, x >> 6 & 3]) {
            if get(&s, "L", t[0], t[1]) && get(&s, "U", t[1], t[2]) && get(&s, "R", t[2], t[3]) {
                paths.push(t);
            }
        }
        for t in paths {
            s.get_mut("S").unwrap().insert(&t);
        }
        s
    }

    #[test]
    fn torus_satisfies_every_axiom() {
        let s = torus();
        for (name, t) in grid_terms() {
            assert!(satisfied(&s, &t).unwrap(), "{name}");
        }
        assert!(eval_fo(&grid_like(), &s, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn missing_inverse_is_detected() {
        let mut s = Structure::new(2, &grid_vocabulary());
        s.get_mut("R").unwrap().insert(&[0, 1]);
        let (_, t) = grid_terms().into_iter().find(|(n, _)| *n == "inverse R").unwrap();
        assert!(!satisfied(&s, &t).unwrap());
    }

    #[test]
    fn sentence_is_in_the_fragment() {
        let allowed = OpSet::of(&[Op::Cyc, Op::Neg, Op::DotCap, Op::Exists1, Op::Exists0]);
        assert!(operators_used(&grid_sentence().desugar()).is_subset(allowed));
    }

    #[test]
    fn generated_structures_are_grid_like() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let terms = grid_terms();
        for i in 0..100 {
            let s = random_grid_like_structure(&mut rng, 1 + i % 4, 0.4);
            for (name, t) in terms.iter().filter(|(n, _)| *n != "successor") {
                assert!(satisfied(&s, t).unwrap(), "{name}");
            }
            assert!(eval_fo(&grid_like(), &s, &BTreeMap::new()).unwrap());
        }
    }
}
