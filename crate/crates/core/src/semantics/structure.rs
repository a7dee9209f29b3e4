use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::relation::ADRelation;
use crate::algebra::Vocabulary;
use crate::error::{Error, Result};

/// A finite structure with domain `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    domain: usize,
    relations: BTreeMap<String, ADRelation>,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    domain: usize,
    relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl Structure {
    /// A structure interpreting every symbol of `vocab` as the empty relation.
    pub fn new(domain: usize, vocab: &Vocabulary) -> Self {
        assert!(domain >= 1, "domains are nonempty");
        let relations =
            vocab.iter().map(|(n, a)| (n.to_string(), ADRelation::empty(domain, a))).collect();
        Structure { domain, relations }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn get(&self, name: &str) -> Option<&ADRelation> {
        self.relations.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut ADRelation> {
        self.relations.get_mut(name)
    }

    /// Sets the interpretation of `name`, replacing any previous one.
    pub fn set(&mut self, name: &str, rel: ADRelation) {
        assert_eq!(rel.domain(), self.domain, "relation over a different domain");
        self.relations.insert(name.to_string(), rel);
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &ADRelation)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (n, r) in &self.relations {
            // Names come from a vocabulary or a validated file.
            let _ = v.add(n, r.arity());
        }
        v
    }

    /// Keeps only the symbols of `vocab`.
    pub fn restricted(&self, vocab: &Vocabulary) -> Structure {
        let relations = self
            .relations
            .iter()
            .filter(|(n, _)| vocab.contains(n))
            .map(|(n, r)| (n.clone(), r.clone()))
            .collect();
        Structure { domain: self.domain, relations }
    }

    /// Image under a permutation of the domain.
    pub fn permuted(&self, sigma: &[usize]) -> Structure {
        let relations =
            self.relations.iter().map(|(n, r)| (n.clone(), r.permuted(sigma))).collect();
        Structure { domain: self.domain, relations }
    }

    /// Total number of facts.
    pub fn fact_count(&self) -> usize {
        self.relations.values().map(ADRelation::len).sum()
    }

    /// Parses the JSON structure format. Symbols of `vocab` missing from the
    /// file are empty; symbols not in `vocab` are rejected. Without a
    /// vocabulary, arities are inferred from the tuples.
    pub fn from_json(text: &str, vocab: Option<&Vocabulary>) -> Result<Structure> {
        let raw: StructureJson = serde_json::from_str(text)?;
        if raw.domain == 0 {
            return Err(Error::Structure("domain must be at least 1".into()));
        }
        let mut s = match vocab {
            Some(v) => Structure::new(raw.domain, v),
            None => Structure { domain: raw.domain, relations: BTreeMap::new() },
        };
        for (name, tuples) in raw.relations {
            let arity = match vocab {
                Some(v) => v.arity(&name).ok_or_else(|| Error::Undeclared(name.clone()))?,
                None => match tuples.first() {
                    Some(t) => t.len(),
                    None => {
                        return Err(Error::Structure(format!(
                            "cannot infer the arity of empty relation `{name}`"
                        )))
                    }
                },
            };
            let mut rel = ADRelation::empty(raw.domain, arity);
            for t in tuples {
                if t.len() != arity {
                    return Err(Error::Structure(format!(
                        "tuple {t:?} of `{name}` does not have length {arity}"
                    )));
                }
                if t.iter().any(|&a| a >= raw.domain) {
                    return Err(Error::Structure(format!(
                        "tuple {t:?} of `{name}` leaves the domain 0..{}",
                        raw.domain
                    )));
                }
                rel.insert(&t);
            }
            s.relations.insert(name, rel);
        }
        Ok(s)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = StructureJson {
            domain: self.domain,
            relations: self.relations.iter().map(|(n, r)| (n.clone(), r.tuples())).collect(),
        };
        serde_json::to_value(raw).expect("structure serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("structure serializes")
    }
}
