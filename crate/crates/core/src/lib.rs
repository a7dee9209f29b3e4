//! General relational algebra (GRA) over finite structures.
//!
//! Terms are built from relation symbols with arity-definite relation
//! operators. The crate evaluates them, classifies the operator fragment a
//! term lives in, converts sentences to normal form, decides satisfiability
//! for the ordered and one-dimensional fragments, and builds the standard
//! reductions (modal logic, tiling, infinity axioms) into the algebra.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod gen;
pub mod normalform;
pub mod reductions;
pub mod semantics;
pub mod solvers;
pub mod tables;

pub use algebra::{classify, operators_used, parse_term, FragmentVerdict, Op, OpSet, Symbol, Term, Vocabulary};
pub use error::{Error, Result};
pub use semantics::{evaluate, satisfied, ADRelation, Structure};
