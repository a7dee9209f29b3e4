//! Reductions between ordered fragments, modal logics, tilings and FO.

pub mod grid;
pub mod infinity;
pub mod kripke;
pub mod modal;
pub mod ol;
pub mod s52;
pub mod tiling;

pub use grid::{grid_formulas, grid_like, grid_sentence, grid_terms, random_grid_like_structure};
pub use infinity::{infinity_axiom, infinity_axiom_c_free, infinity_conjuncts, truncated_chain};
pub use kripke::{kripke_sat, tree_model_bound, KripkeModel, KripkeVerdict};
pub use modal::{modal_to_term, Agent, ModalFormula};
pub use ol::{is_ol_sentence, ol_to_term};
pub use s52::s52_to_term;
pub use tiling::{tiling_conjuncts, tiling_to_term, tiling_vocabulary, Tile, TileSet};
