use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::structure::Structure;
use crate::algebra::Term;
use crate::error::{Error, Result};

/// First-order formula over the variables `v1, v2, ...` (stored by index).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fo {
    True,
    False,
    Atom(String, Vec<usize>),
    Equal(usize, usize),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Exists(usize, Box<Fo>),
    Forall(usize, Box<Fo>),
}

impl Fo {
    pub fn not(f: Fo) -> Fo {
        Fo::Not(Box::new(f))
    }

    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Fo, b: Fo) -> Fo {
        Fo::or(Fo::not(a), b)
    }

    pub fn exists(v: usize, f: Fo) -> Fo {
        Fo::Exists(v, Box::new(f))
    }

    pub fn forall(v: usize, f: Fo) -> Fo {
        Fo::Forall(v, Box::new(f))
    }

    pub fn atom(name: &str, vars: &[usize]) -> Fo {
        Fo::Atom(name.to_string(), vars.to_vec())
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        match self {
            Fo::True | Fo::False => {}
            Fo::Atom(_, vs) => out.extend(vs.iter().filter(|v| !bound.contains(v))),
            Fo::Equal(a, b) => out.extend([a, b].into_iter().filter(|v| !bound.contains(v))),
            Fo::Not(f) => f.collect_free(bound, out),
            Fo::And(a, b) | Fo::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Fo::Exists(v, f) | Fo::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fo::True => f.write_str("true"),
            Fo::False => f.write_str("false"),
            Fo::Atom(r, vs) => {
                let args: Vec<_> = vs.iter().map(|v| format!("v{v}")).collect();
                write!(f, "{r}({})", args.join(","))
            }
            Fo::Equal(a, b) => write!(f, "v{a} = v{b}"),
            Fo::Not(g) => write!(f, "~{}", Paren(g)),
            Fo::And(a, b) => write!(f, "{} & {}", Paren(a), Paren(b)),
            Fo::Or(a, b) => write!(f, "{} | {}", Paren(a), Paren(b)),
            Fo::Exists(v, g) => write!(f, "ex v{v} {}", Paren(g)),
            Fo::Forall(v, g) => write!(f, "all v{v} {}", Paren(g)),
        }
    }
}

struct Paren<'a>(&'a Fo);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Fo::And(..) | Fo::Or(..) | Fo::Equal(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

struct Translator {
    next: usize,
}

impl Translator {
    fn fresh(&mut self) -> usize {
        self.next += 1;
        self.next
    }

    fn fresh_block(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.fresh()).collect()
    }

    fn quantify(vars: &[usize], body: Fo) -> Fo {
        vars.iter().rev().fold(body, |acc, &v| Fo::exists(v, acc))
    }

    /// `vars[i]` is the variable standing for coordinate `i` of the term.
    fn go(&mut self, t: &Term, vars: &[usize]) -> Fo {
        match t {
            Term::Bot => Fo::False,
            Term::Top => Fo::True,
            Term::Rel(s) => Fo::atom(&s.name, vars),
            Term::Neg(a) => Fo::not(self.go(a, vars)),
            Term::Cap(a, b) => {
                if a.arity() == b.arity() {
                    Fo::and(self.go(a, vars), self.go(b, vars))
                } else {
                    Fo::False
                }
            }
            Term::DotCap(a, b) => {
                let m = vars.len();
                let fa = self.go(a, &vars[m - a.arity()..]);
                let fb = self.go(b, &vars[m - b.arity()..]);
                Fo::and(fa, fb)
            }
            Term::OneDimCap(a, b) => match (a.arity(), b.arity()) {
                (1, 1) => Fo::and(self.go(a, vars), self.go(b, vars)),
                (1, l) if l >= 2 => {
                    let fb = self.go(b, vars);
                    Fo::and(fb, self.go(a, &vars[l - 1..]))
                }
                (k, 1) if k >= 2 => {
                    let fa = self.go(a, vars);
                    Fo::and(fa, self.go(b, &vars[k - 1..]))
                }
                _ => Fo::False,
            },
            Term::Exists(a) => {
                if a.arity() == 0 {
                    return self.go(a, vars);
                }
                let z = self.fresh();
                let mut inner = vars.to_vec();
                inner.push(z);
                Fo::exists(z, self.go(a, &inner))
            }
            Term::Exists1(a) => {
                let k = a.arity();
                if k < 2 {
                    return self.go(a, vars);
                }
                let block = self.fresh_block(k - 1);
                let mut inner = vec![vars[0]];
                inner.extend(&block);
                let body = self.go(a, &inner);
                Self::quantify(&block, body)
            }
            Term::Exists0(a) => {
                let block = self.fresh_block(a.arity());
                let body = self.go(a, &block);
                Self::quantify(&block, body)
            }
            Term::Eq(a) => {
                let k = vars.len();
                let body = self.go(a, vars);
                if k < 2 {
                    body
                } else {
                    Fo::and(body, Fo::Equal(vars[k - 2], vars[k - 1]))
                }
            }
            Term::Subst(a) => {
                if a.arity() <= 1 {
                    return self.go(a, vars);
                }
                let mut inner = vars.to_vec();
                inner.push(*vars.last().expect("I on arity ≥ 2 has a last coordinate"));
                self.go(a, &inner)
            }
            Term::Swap(a) => {
                let mut inner = vars.to_vec();
                let k = inner.len();
                if k >= 2 {
                    inner.swap(k - 2, k - 1);
                }
                self.go(a, &inner)
            }
            Term::Cyc(a) => {
                let k = vars.len();
                if k < 2 {
                    return self.go(a, vars);
                }
                let mut inner = vec![vars[k - 1]];
                inner.extend(&vars[..k - 1]);
                self.go(a, &inner)
            }
            sugar => self.go(&sugar.desugar(), vars),
        }
    }
}

/// Translates a term of arity `k` into a formula with free variables among
/// `v1..vk`, coordinate `i` read as `v(i+1)`. Bound variables are numbered from `k+1`.
pub fn term_to_fo(term: &Term) -> Fo {
    let k = term.arity();
    let vars: Vec<usize> = (1..=k).collect();
    Translator { next: k }.go(term, &vars)
}

/// Tarskian evaluation. Every free variable must be assigned.
pub fn eval_fo(f: &Fo, s: &Structure, assignment: &BTreeMap<usize, usize>) -> Result<bool> {
    let size = f.max_var().max(assignment.keys().copied().max().unwrap_or(0)) + 1;
    let mut env = vec![None; size];
    for (&v, &a) in assignment {
        env[v] = Some(a);
    }
    eval_env(f, s, &mut env)
}

impl Fo {
    fn max_var(&self) -> usize {
        match self {
            Fo::True | Fo::False => 0,
            Fo::Atom(_, vs) => vs.iter().copied().max().unwrap_or(0),
            Fo::Equal(a, b) => *a.max(b),
            Fo::Not(g) => g.max_var(),
            Fo::And(a, b) | Fo::Or(a, b) => a.max_var().max(b.max_var()),
            Fo::Exists(v, g) | Fo::Forall(v, g) => (*v).max(g.max_var()),
        }
    }
}

fn lookup(env: &[Option<usize>], v: usize) -> Result<usize> {
    env.get(v).copied().flatten().ok_or(Error::Unbound(v))
}

fn eval_env(f: &Fo, s: &Structure, env: &mut Vec<Option<usize>>) -> Result<bool> {
    Ok(match f {
        Fo::True => true,
        Fo::False => false,
        Fo::Atom(r, vs) => {
            let tuple = vs.iter().map(|&v| lookup(env, v)).collect::<Result<Vec<_>>>()?;
            s.get(r).is_some_and(|rel| rel.contains(&tuple))
        }
        Fo::Equal(a, b) => lookup(env, *a)? == lookup(env, *b)?,
        Fo::Not(g) => !eval_env(g, s, env)?,
        Fo::And(a, b) => eval_env(a, s, env)? && eval_env(b, s, env)?,
        Fo::Or(a, b) => eval_env(a, s, env)? || eval_env(b, s, env)?,
        Fo::Exists(v, g) | Fo::Forall(v, g) => {
            let want = matches!(f, Fo::Exists(..));
            let saved = env[*v];
            let mut result = !want;
            for a in 0..s.domain() {
                env[*v] = Some(a);
                if eval_env(g, s, env)? == want {
                    result = want;
                    break;
                }
            }
            env[*v] = saved;
            result
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_term, Vocabulary};
    use crate::semantics::ADRelation;

    fn assign(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn projection_of_swapped_relation() {
        let v = Vocabulary::parse("R/2").unwrap();
        let f = term_to_fo(&parse_term("ex s R", &v).unwrap());
        assert_eq!(f.to_string(), "ex v2 R(v2,v1)");
    }

    #[test]
    fn suffix_intersection_reading() {
        let v = Vocabulary::parse("R/2, P/1").unwrap();
        let f = term_to_fo(&parse_term("s (s R dotcap P)", &v).unwrap());
        assert_eq!(f.to_string(), "R(v1,v2) & P(v1)");
    }

    #[test]
    fn equality_from_diagonal() {
        let v = Vocabulary::parse("R/2").unwrap();
        let f = term_to_fo(&parse_term("E (R cup not R)", &v).unwrap());
        let mut s = Structure::new(2, &v);
        s.set("R", ADRelation::from_tuples(2, 2, [[0, 1]]));
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(eval_fo(&f, &s, &assign(&[(1, a), (2, b)])).unwrap(), a == b);
            }
        }
    }

    #[test]
    fn evaluation_basics() {
        let v = Vocabulary::parse("R/2, P/1, S/3").unwrap();
        let mut s = Structure::new(2, &v);
        s.set("R", ADRelation::from_tuples(2, 2, [[0, 1]]));
        let f = Fo::exists(1, Fo::atom("R", &[1, 2]));
        assert!(eval_fo(&f, &s, &assign(&[(2, 1)])).unwrap());
        assert!(!eval_fo(&Fo::Equal(1, 2), &s, &assign(&[(1, 0), (2, 1)])).unwrap());
        assert!(matches!(eval_fo(&f, &s, &assign(&[])), Err(Error::Unbound(2))));

        s.set("P", ADRelation::from_tuples(2, 1, [[0]]));
        s.set("S", ADRelation::from_tuples(2, 3, [[0, 1, 0], [0, 1, 1]]));
        let sentence = Fo::forall(
            1,
            Fo::implies(
                Fo::atom("P", &[1]),
                Fo::exists(2, Fo::and(Fo::atom("R", &[1, 2]), Fo::forall(3, Fo::atom("S", &[1, 2, 3])))),
            ),
        );
        assert!(sentence.is_closed());
        assert!(eval_fo(&sentence, &s, &assign(&[])).unwrap());
    }
}
