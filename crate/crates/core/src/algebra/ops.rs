use std::fmt;

/// Core relation operators. Sugar (∪, ⋅∪, ∀, ∀₁, ∀₀) is attributed to these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Cyc,
    Swap,
    Subst,
    Eq,
    Neg,
    OneDimCap,
    Cap,
    DotCap,
    Exists,
    Exists1,
    Exists0,
}

impl Op {
    pub const ALL: [Op; 11] = [
        Op::Cyc,
        Op::Swap,
        Op::Subst,
        Op::Eq,
        Op::Neg,
        Op::OneDimCap,
        Op::Cap,
        Op::DotCap,
        Op::Exists,
        Op::Exists1,
        Op::Exists0,
    ];

    fn bit(self) -> u16 {
        1 << (self as u16)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Cyc => "p",
            Op::Swap => "s",
            Op::Subst => "I",
            Op::Eq => "E",
            Op::Neg => "¬",
            Op::OneDimCap => "C",
            Op::Cap => "∩",
            Op::DotCap => "⋅∩",
            Op::Exists => "∃",
            Op::Exists1 => "∃₁",
            Op::Exists0 => "∃₀",
        }
    }

    /// ASCII name accepted by [`OpSet::parse`].
    pub fn ascii(self) -> &'static str {
        match self {
            Op::Cyc => "p",
            Op::Swap => "s",
            Op::Subst => "I",
            Op::Eq => "E",
            Op::Neg => "not",
            Op::OneDimCap => "C",
            Op::Cap => "cap",
            Op::DotCap => "dotcap",
            Op::Exists => "ex",
            Op::Exists1 => "ex1",
            Op::Exists0 => "ex0",
        }
    }
}

/// A set of core operators, printed in the conventional order `{p,s,I,E,¬,C,∩,⋅∩,∃,∃₁,∃₀}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSet(u16);

impl OpSet {
    pub const EMPTY: OpSet = OpSet(0);

    pub const fn of(ops: &[Op]) -> OpSet {
        let mut bits = 0;
        let mut i = 0;
        while i < ops.len() {
            bits |= 1 << (ops[i] as u16);
            i += 1;
        }
        OpSet(bits)
    }

    pub fn with(self, op: Op) -> OpSet {
        OpSet(self.0 | op.bit())
    }

    pub fn insert(&mut self, op: Op) {
        self.0 |= op.bit();
    }

    pub fn contains(self, op: Op) -> bool {
        self.0 & op.bit() != 0
    }

    pub fn is_subset(self, other: OpSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: OpSet) -> OpSet {
        OpSet(self.0 | other.0)
    }

    pub fn minus(self, other: OpSet) -> OpSet {
        OpSet(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Op> {
        Op::ALL.into_iter().filter(move |&o| self.contains(o))
    }

    /// Parses a comma separated list of ASCII operator names (`s,E,not,cap,ex`).
    pub fn parse(text: &str) -> Option<OpSet> {
        let mut set = OpSet::EMPTY;
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let op = Op::ALL
                .into_iter()
                .find(|o| o.ascii() == part || o.symbol() == part)?;
            set.insert(op);
        }
        Some(set)
    }
}

impl fmt::Display for OpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.iter().map(Op::symbol).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for OpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Op> for OpSet {
    fn from_iter<T: IntoIterator<Item = Op>>(iter: T) -> Self {
        iter.into_iter().fold(OpSet::EMPTY, OpSet::with)
    }
}
