//! Finite structures, relation values, the term evaluator and the first-order bridge.

mod eval;
mod fo;
mod fo_parse;
mod relation;
mod structure;

pub use eval::{evaluate, satisfied};
pub use fo::{eval_fo, term_to_fo, Fo};
pub use fo_parse::parse_fo;
pub use relation::ADRelation;
pub use structure::Structure;
