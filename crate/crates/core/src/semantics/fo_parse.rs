use super::fo::Fo;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Sym(&'static str),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Word(text[start..i].to_string())));
        } else {
            let sym = ["->", "(", ")", ",", "&", "|", "~", "="]
                .into_iter()
                .find(|s| text[i..].starts_with(s))
                .ok_or_else(|| Error::Syntax { pos: i, msg: format!("unexpected `{c}`") })?;
            out.push((i, Tok::Sym(sym)));
            i += sym.len();
        }
    }
    Ok(out)
}

fn var_index(word: &str) -> Option<usize> {
    word.strip_prefix('v')?.parse().ok().filter(|&v| v > 0)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        let pos = self.toks.get(self.pos).map_or(self.end, |(o, _)| *o);
        Err(Error::Syntax { pos, msg: msg.to_string() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn var(&mut self) -> Result<usize> {
        if let Some(Tok::Word(w)) = self.peek() {
            if let Some(v) = var_index(w) {
                self.pos += 1;
                return Ok(v);
            }
        }
        self.err("expected a variable vN")
    }

    fn formula(&mut self) -> Result<Fo> {
        let left = self.disjunction()?;
        if self.eat("->") {
            Ok(Fo::implies(left, self.formula()?))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Fo> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            f = Fo::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Fo> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Fo::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Fo> {
        if self.eat("~") {
            return Ok(Fo::not(self.unary()?));
        }
        if let Some(Tok::Word(w)) = self.peek() {
            match w.as_str() {
                "not" => {
                    self.pos += 1;
                    return Ok(Fo::not(self.unary()?));
                }
                "ex" | "all" => {
                    let exists = w == "ex";
                    self.pos += 1;
                    let v = self.var()?;
                    let body = self.unary()?;
                    return Ok(if exists { Fo::exists(v, body) } else { Fo::forall(v, body) });
                }
                _ => {}
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Fo> {
        if self.eat("(") {
            let f = self.formula()?;
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            return Ok(f);
        }
        let word = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return self.err("expected a formula"),
        };
        self.pos += 1;
        match word.as_str() {
            "true" => return Ok(Fo::True),
            "false" => return Ok(Fo::False),
            _ => {}
        }
        if self.eat("(") {
            let mut args = vec![self.var()?];
            while self.eat(",") {
                args.push(self.var()?);
            }
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            return Ok(Fo::Atom(word, args));
        }
        match var_index(&word) {
            Some(a) if self.eat("=") => Ok(Fo::Equal(a, self.var()?)),
            _ => {
                self.pos -= 1;
                self.err("expected an atom R(v1,...) or an equality")
            }
        }
    }
}

/// Parses first-order text: `ex v1`, `all v1`, `~`/`not`, `&`, `|`, `->`,
/// atoms `R(v1,v2)`, equalities `v1 = v2`, `true`, `false`.
pub fn parse_fo(text: &str) -> Result<Fo> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_guarded_sentence() {
        let f = parse_fo("all v1 (P(v1) -> ex v2 (R(v1,v2) & all v3 S(v1,v2,v3)))").unwrap();
        assert!(f.is_closed());
        assert_eq!(parse_fo(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn precedence() {
        let f = parse_fo("~P(v1) & Q(v1) | v1 = v2").unwrap();
        let expected = Fo::or(
            Fo::and(Fo::not(Fo::atom("P", &[1])), Fo::atom("Q", &[1])),
            Fo::Equal(1, 2),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn errors() {
        assert!(parse_fo("ex x P(x)").is_err());
        assert!(parse_fo("P(v1").is_err());
        assert!(parse_fo("P(v1) Q(v1)").is_err());
    }
}
