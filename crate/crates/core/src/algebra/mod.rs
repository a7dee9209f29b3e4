//! Vocabularies, terms, their concrete syntax, and fragment classification.

mod classify;
mod ops;
mod parse;
mod term;
mod vocab;

pub use classify::{classify, classify_ops, Complexity, FragmentStatus, FragmentVerdict, TableRow, TABLE};
pub use ops::{Op, OpSet};
pub use parse::{parse_term, parse_term_file, TermFile};
pub use term::{operators_used, Symbol, Term};
pub(crate) use term::onedim_arity;
pub use vocab::{Vocabulary, KEYWORDS};
