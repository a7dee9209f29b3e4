use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Words reserved by the term syntax; they cannot name relation symbols.
pub const KEYWORDS: &[&str] = &[
    "not", "cap", "cup", "dotcap", "dotcup", "ex", "all", "ex1", "ex0", "all1", "all0", "E", "I",
    "s", "p", "C", "top", "bot",
];

/// A purely relational vocabulary: symbol names with positive arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        let mut v = Vocabulary::new();
        for (name, arity) in pairs {
            v.add(name, arity)?;
        }
        Ok(v)
    }

    /// Parses a declaration list such as `R/2, P/1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut v = Vocabulary::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, arity) = item
                .split_once('/')
                .ok_or_else(|| Error::Vocabulary(format!("expected NAME/ARITY, got `{item}`")))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| Error::Vocabulary(format!("bad arity in `{item}`")))?;
            v.add(name.trim(), arity)?;
        }
        Ok(v)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::Vocabulary(format!("invalid symbol name `{name}`")));
        }
        if KEYWORDS.contains(&name) {
            return Err(Error::Vocabulary(format!("`{name}` is a reserved word")));
        }
        if arity == 0 {
            return Err(Error::Vocabulary(format!("symbol `{name}` must have positive arity")));
        }
        match self.symbols.get(name) {
            Some(&a) if a != arity => Err(Error::Vocabulary(format!(
                "symbol `{name}` declared with arities {a} and {arity}"
            ))),
            Some(_) => Ok(()),
            None => {
                self.symbols.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    /// Union of two vocabularies; fails on conflicting arities.
    pub fn merged(&self, other: &Vocabulary) -> Result<Vocabulary> {
        let mut v = self.clone();
        for (n, a) in other.iter() {
            v.add(n, a)?;
        }
        Ok(v)
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.iter().map(|(n, a)| format!("{n}/{a}")).collect();
        f.write_str(&parts.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}
