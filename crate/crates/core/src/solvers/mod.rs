//! Satisfiability engines: the grounding oracle, the ordered and
//! one-dimensional decision procedures, and bounded-model size bounds.

pub mod bounds;
pub mod cdcl;
pub mod ground;
pub mod onedim;
pub mod oracle;
pub mod ordered;
mod qf;

use std::time::Duration;

use crate::semantics::Structure;

pub use bounds::size_bound;
pub use onedim::{solve_onedim_eq, solve_onedim_eq_with};
pub use oracle::{brute_force_sat, check_no_finite_model_upto, count_models, oracle_sat, sat_at_size, OracleOptions};
pub use ordered::{solve_ordered_eq, solve_ordered_eq_with};

/// Limits and reporting options shared by the decision procedures.
#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    pub timeout: Option<Duration>,
    /// Record the choices of the accepting run.
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatStatus {
    Sat(Structure),
    Unsat,
    /// No model up to the size bound searched, or the time limit was hit.
    Unknown,
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub branches: u64,
    pub elapsed: Duration,
    pub max_size_tried: usize,
}

#[derive(Clone, Debug)]
pub struct SatVerdict {
    pub status: SatStatus,
    pub stats: SolveStats,
    /// Choices of an accepting run, one `guess <kind> <value>` line each.
    pub trace: Vec<String>,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, SatStatus::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        self.status == SatStatus::Unsat
    }

    pub fn model(&self) -> Option<&Structure> {
        match &self.status {
            SatStatus::Sat(m) => Some(m),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            SatStatus::Sat(_) => "SAT",
            SatStatus::Unsat => "UNSAT",
            SatStatus::Unknown => "UNKNOWN",
        }
    }
}
