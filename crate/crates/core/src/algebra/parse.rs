use super::term::Term;
use super::vocab::Vocabulary;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' => {
                chars.next();
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                out.push((i, tok));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Word(word)));
            }
            other => {
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{other}`") })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut left = self.unary()?;
        loop {
            let ctor: fn(Term, Term) -> Term = match self.peek() {
                Some(Tok::Word(w)) => match w.as_str() {
                    "cap" => Term::cap,
                    "cup" => Term::cup,
                    "dotcap" => Term::dotcap,
                    "dotcup" => Term::dotcup,
                    _ => return Ok(left),
                },
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.unary()?;
            left = ctor(left, right);
        }
    }

    fn unary(&mut self) -> Result<Term> {
        let ctor: fn(Term) -> Term = match self.peek() {
            Some(Tok::Word(w)) => match w.as_str() {
                "not" => Term::not,
                "ex" => Term::ex,
                "ex1" => Term::ex1,
                "ex0" => Term::ex0,
                "all" => Term::all,
                "all1" => Term::all1,
                "all0" => Term::all0,
                "E" => Term::eq,
                "I" => Term::subst,
                "s" => Term::swap,
                "p" => Term::cyc,
                _ => return self.atom(),
            },
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(ctor(self.unary()?))
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Word(w)) => {
                let start = self.offset();
                self.pos += 1;
                match w.as_str() {
                    "top" => Ok(Term::Top),
                    "bot" => Ok(Term::Bot),
                    "C" => {
                        self.expect(Tok::LParen, "`(` after C")?;
                        let a = self.expr()?;
                        self.expect(Tok::Comma, "`,` in C(_, _)")?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Term::onedim(a, b))
                    }
                    "cap" | "cup" | "dotcap" | "dotcup" => {
                        Err(Error::Syntax { pos: start, msg: format!("`{w}` needs a left operand") })
                    }
                    name => match self.vocab.arity(name) {
                        Some(a) => Ok(Term::rel(name, a)),
                        None => Err(Error::Undeclared(name.to_string())),
                    },
                }
            }
            Some(_) => self.error("expected a term"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a term in the ASCII syntax over `vocab`.
pub fn parse_term(text: &str, vocab: &Vocabulary) -> Result<Term> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vocab };
    let t = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(t)
}

/// Contents of a term file: a vocabulary line followed by a term.
#[derive(Clone, Debug)]
pub struct TermFile {
    pub vocab: Vocabulary,
    pub term: Term,
}

impl TermFile {
    pub fn render(&self) -> String {
        format!("vocab: {}\nterm: {}\n", self.vocab, self.term)
    }
}

/// Parses `vocab: ...` / `term: ...` text. The term may continue on following lines;
/// `#` starts a comment.
pub fn parse_term_file(text: &str) -> Result<TermFile> {
    let mut vocab = None;
    let mut term_src: Option<String> = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vocab:") {
            if vocab.is_some() {
                return Err(Error::Input("duplicate `vocab:` line".into()));
            }
            vocab = Some(Vocabulary::parse(rest)?);
        } else if let Some(rest) = line.strip_prefix("term:") {
            if term_src.is_some() {
                return Err(Error::Input("duplicate `term:` line".into()));
            }
            term_src = Some(rest.to_string());
        } else if let Some(src) = term_src.as_mut() {
            src.push(' ');
            src.push_str(line);
        } else {
            return Err(Error::Input(format!("unexpected line `{line}`")));
        }
    }
    let vocab = vocab.ok_or_else(|| Error::Input("missing `vocab:` line".into()))?;
    let src = term_src.ok_or_else(|| Error::Input("missing `term:` line".into()))?;
    let term = parse_term(&src, &vocab)?;
    Ok(TermFile { vocab, term })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::parse("P/1, R/2, S/3").unwrap()
    }

    #[test]
    fn nested_exists() {
        let t = parse_term("ex ex R", &vocab()).unwrap();
        assert_eq!(t, Term::ex(Term::ex(Term::rel("R", 2))));
    }

    #[test]
    fn sugar_desugars_to_expected_core() {
        let t = parse_term("all (not P cup ex (R cap all S))", &vocab()).unwrap();
        let expected = "not ex not (not (P cap not ex (R cap not ex not S)))";
        assert_eq!(t.desugar(), parse_term(expected, &vocab()).unwrap());
    }

    #[test]
    fn one_dimensional_intersection() {
        let t = parse_term("C(R, P)", &vocab()).unwrap();
        assert_eq!(t, Term::onedim(Term::rel("R", 2), Term::rel("P", 1)));
    }

    #[test]
    fn infix_is_left_associative() {
        let t = parse_term("P cap P cup P", &vocab()).unwrap();
        let p = || Term::rel("P", 1);
        assert_eq!(t, Term::cup(Term::cap(p(), p()), p()));
        assert_eq!(parse_term(&t.to_string(), &vocab()).unwrap(), t);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("ex (R cap", &vocab()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_term("ex Q", &vocab()), Err(Error::Undeclared(_))));
        assert!(matches!(parse_term("R R", &vocab()), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn term_file() {
        let f = parse_term_file("# demo\nvocab: R/2\nterm: ex\n  ex R # trailing\n").unwrap();
        assert_eq!(f.term.to_string(), "ex ex R");
        assert_eq!(parse_term_file(&f.render()).unwrap().term, f.term);
    }
}
