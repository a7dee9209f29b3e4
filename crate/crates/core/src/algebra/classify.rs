use std::fmt;

use super::ops::{Op, OpSet};
use super::term::{operators_used, Term};

use Op::*;

/// Complexity labels of the known fragments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Complexity {
    NpComplete,
    PspaceComplete,
    NexptimeComplete,
    NexptimeHard,
    TowerComplete,
    Pi01Complete,
}

impl Complexity {
    pub fn label(self) -> &'static str {
        match self {
            Complexity::NpComplete => "NP-complete",
            Complexity::PspaceComplete => "PSPACE-complete",
            Complexity::NexptimeComplete => "NEXPTIME-complete",
            Complexity::NexptimeHard => "NEXPTIME-hard",
            Complexity::TowerComplete => "TOWER-complete",
            Complexity::Pi01Complete => "Π⁰₁-complete",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub ops: OpSet,
    pub complexity: Complexity,
}

const fn row(ops: &[Op], complexity: Complexity) -> TableRow {
    TableRow { ops: OpSet::of(ops), complexity }
}

/// Known satisfiability complexities of GRA fragments.
pub const TABLE: [TableRow; 12] = [
    row(&[Eq, Neg, Cap, Exists1, Exists0], Complexity::NpComplete),
    row(&[Eq, Neg, Cap, Exists], Complexity::PspaceComplete),
    row(&[Swap, Neg, OneDimCap, Cap, Exists], Complexity::NexptimeComplete),
    row(&[Eq, Neg, OneDimCap, Cap, Exists], Complexity::NexptimeComplete),
    row(&[Swap, Eq, Neg, DotCap, Exists1, Exists0], Complexity::NexptimeComplete),
    row(&[Swap, Eq, Neg, OneDimCap, Cap, Exists], Complexity::NexptimeHard),
    row(&[Cyc, Neg, Cap, Exists], Complexity::Pi01Complete),
    row(&[Cyc, Neg, DotCap, Exists1, Exists0], Complexity::Pi01Complete),
    row(&[Swap, Neg, DotCap, Exists], Complexity::Pi01Complete),
    row(&[Neg, DotCap, Exists], Complexity::TowerComplete),
    row(&[Eq, Neg, DotCap, Exists], Complexity::TowerComplete),
    row(&[Cyc, Swap, Eq, Neg, OneDimCap, Cap, Exists1, Exists0], Complexity::NexptimeComplete),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentStatus {
    Decidable(Complexity),
    Undecidable,
    /// A lower bound is known but decidability is open.
    HardnessOnly(Complexity),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentVerdict {
    pub ops: OpSet,
    pub row: Option<TableRow>,
    pub status: FragmentStatus,
    pub note: Option<String>,
}

impl FragmentVerdict {
    pub fn label(&self) -> String {
        match self.status {
            FragmentStatus::Decidable(c) => c.label().to_string(),
            FragmentStatus::Undecidable => "undecidable (Π⁰₁)".to_string(),
            FragmentStatus::HardnessOnly(c) => format!("{}; decidability open", c.label()),
            FragmentStatus::Unknown => "unknown".to_string(),
        }
    }

    pub fn is_decidable(&self) -> bool {
        matches!(self.status, FragmentStatus::Decidable(_))
    }
}

impl fmt::Display for FragmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

/// Classifies an operator set, given the largest symbol arity in use.
///
/// `I` is matched as `∃E`, which it abbreviates on arities at least 2.
pub fn classify_ops(ops: OpSet, max_arity: usize) -> FragmentVerdict {
    let effective = if ops.contains(Subst) {
        ops.minus(OpSet::of(&[Subst])).with(Eq).with(Exists)
    } else {
        ops
    };
    if let Some(r) = TABLE
        .iter()
        .find(|r| r.complexity == Complexity::Pi01Complete && r.ops.is_subset(effective))
    {
        let note = (r.ops == OpSet::of(&[Swap, Neg, DotCap, Exists])
            && effective.is_subset(r.ops)
            && max_arity <= 2)
            .then(|| "decidable over at most binary vocabularies".to_string());
        return FragmentVerdict { ops, row: Some(*r), status: FragmentStatus::Undecidable, note };
    }
    let best = TABLE
        .iter()
        .filter(|r| r.complexity != Complexity::Pi01Complete && effective.is_subset(r.ops))
        .min_by_key(|r| (r.complexity, r.ops.len()));
    match best {
        Some(r) => {
            let status = match r.complexity {
                Complexity::NexptimeHard => FragmentStatus::HardnessOnly(r.complexity),
                c => FragmentStatus::Decidable(c),
            };
            FragmentVerdict { ops, row: Some(*r), status, note: None }
        }
        None => FragmentVerdict { ops, row: None, status: FragmentStatus::Unknown, note: None },
    }
}

/// Classifies a term by the operators it uses.
pub fn classify(term: &Term) -> FragmentVerdict {
    let max_arity = term.symbols().values().copied().max().unwrap_or(0);
    classify_ops(operators_used(term), max_arity)
}
