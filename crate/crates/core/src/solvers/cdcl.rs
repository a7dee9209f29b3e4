//! Conflict-driven clause learning SAT solver: two watched literals, first-UIP
//! learning, activity-ordered branching seeded by clause occurrences, phase
//! saving and Luby restarts.

use std::ops::Not;
use std::time::Instant;

pub type Var = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(v: Var, positive: bool) -> Lit {
        Lit(v << 1 | (!positive) as u32)
    }

    pub fn pos(v: Var) -> Lit {
        Lit::new(v, true)
    }

    pub fn neg(v: Var) -> Lit {
        Lit::new(v, false)
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
    /// The deadline passed first.
    Unknown,
}

const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;

#[derive(Default)]
struct Heap {
    items: Vec<Var>,
    pos: Vec<Option<usize>>,
}

impl Heap {
    fn contains(&self, v: Var) -> bool {
        self.pos.get(v as usize).is_some_and(Option::is_some)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.items[parent];
            if act[pv as usize] >= act[v as usize] {
                break;
            }
            self.items[i] = pv;
            self.pos[pv as usize] = Some(i);
            i = parent;
        }
        self.items[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        let len = self.items.len();
        loop {
            let l = 2 * i + 1;
            if l >= len {
                break;
            }
            let r = l + 1;
            let child = if r < len && act[self.items[r] as usize] > act[self.items[l] as usize] {
                r
            } else {
                l
            };
            let cv = self.items[child];
            if act[cv as usize] <= act[v as usize] {
                break;
            }
            self.items[i] = cv;
            self.pos[cv as usize] = Some(i);
            i = child;
        }
        self.items[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.pos.len() <= v as usize {
            self.pos.resize(v as usize + 1, None);
        }
        if self.contains(v) {
            return;
        }
        self.items.push(v);
        let i = self.items.len() - 1;
        self.up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.items.first()?;
        let last = self.items.pop().expect("nonempty");
        self.pos[top as usize] = None;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last as usize] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn increased(&mut self, v: Var, act: &[f64]) {
        if let Some(i) = self.pos.get(v as usize).copied().flatten() {
            self.up(i, act);
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
}

#[derive(Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    model: Vec<bool>,
    pub stats: Stats,
}

fn luby(mut i: u64) -> u64 {
    let mut size = 1;
    let mut seq = 0;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

impl Solver {
    pub fn new() -> Self {
        Solver { var_inc: 1.0, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assign.len() as Var;
        self.assign.push(UNDEF);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.insert(v, &self.activity);
        v
    }

    fn value(&self, l: Lit) -> u8 {
        match self.assign[l.var() as usize] {
            UNDEF => UNDEF,
            a => a ^ (!l.is_positive()) as u8,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.assign[v] = l.is_positive() as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl as usize];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.phase[v] = l.is_positive();
            self.assign[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.insert(v as Var, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = start;
    }

    /// Adds a clause. Returns false once the clause set is known unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if self.unsat {
            return false;
        }
        self.cancel_until(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if c.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        c.retain(|&l| self.value(l) == UNDEF);
        let weight = 1.0 / (c.len().max(1) as f64);
        for l in &c {
            self.activity[l.var() as usize] += weight;
            self.heap.increased(l.var(), &self.activity);
        }
        match c.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(c);
                true
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> u32 {
        let cr = self.clauses.len() as u32;
        self.watches[c[0].index()].push(cr);
        self.watches[c[1].index()].push(cr);
        self.clauses.push(c);
        cr
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let cr = ws[i];
                i += 1;
                let c = &mut self.clauses[cr as usize];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.assign[first.var() as usize] != UNDEF
                    && self.assign[first.var() as usize] ^ (!first.is_positive()) as u8 == 1
                {
                    kept.push(cr);
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let a = self.assign[l.var() as usize];
                    if a == UNDEF || a ^ (!l.is_positive()) as u8 == 1 {
                        c.swap(1, k);
                        let w = c[1];
                        self.watches[w.index()].push(cr);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(cr);
                if self.value(first) == 0 {
                    conflict = Some(cr);
                    kept.extend_from_slice(&ws[i..]);
                    break;
                }
                self.enqueue(first, cr);
            }
            let slot = &mut self.watches[false_lit.index()];
            kept.append(slot);
            *slot = kept;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            self.activity.iter_mut().for_each(|a| *a *= 1e-100);
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut cr = confl;
        let current = self.decision_level();
        loop {
            let skip = usize::from(p.is_some());
            let lits: Vec<Lit> = self.clauses[cr as usize][skip..].to_vec();
            for q in lits {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(q.var());
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let pl = self.trail[idx];
            p = Some(pl);
            self.seen[pl.var() as usize] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = !pl;
                break;
            }
            cr = self.reason[pl.var() as usize];
        }
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[best].var() as usize] {
                    best = i;
                }
            }
            learnt.swap(1, best);
            bt = self.level[learnt[1].var() as usize];
        }
        (learnt, bt)
    }

    fn search(&mut self, budget: u64, deadline: Option<Instant>) -> Option<SolveResult> {
        let mut conflicts = 0;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return Some(SolveResult::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cr = self.attach(learnt);
                    self.enqueue(first, cr);
                }
                self.var_inc /= 0.95;
                if conflicts % 256 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                    return Some(SolveResult::Unknown);
                }
            } else {
                if conflicts >= budget {
                    self.cancel_until(0);
                    return None;
                }
                let next = loop {
                    match self.heap.pop(&self.activity) {
                        Some(v) if self.assign[v as usize] == UNDEF => break Some(v),
                        Some(_) => continue,
                        None => break None,
                    }
                };
                let Some(v) = next else {
                    self.model = self.assign.iter().map(|&a| a == 1).collect();
                    return Some(SolveResult::Sat);
                };
                self.stats.decisions += 1;
                if self.stats.decisions.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d)
                {
                    return Some(SolveResult::Unknown);
                }
                self.trail_lim.push(self.trail.len());
                self.enqueue(Lit::new(v, self.phase[v as usize]), NO_REASON);
            }
        }
    }

    pub fn solve(&mut self, deadline: Option<Instant>) -> SolveResult {
        if self.unsat {
            return SolveResult::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.unsat = true;
            return SolveResult::Unsat;
        }
        for restart in 0.. {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return SolveResult::Unknown;
            }
            if let Some(r) = self.search(100 * luby(restart), deadline) {
                if r == SolveResult::Unknown {
                    self.cancel_until(0);
                }
                return r;
            }
        }
        unreachable!("restart loop only exits by returning")
    }

    /// Value of a variable in the last satisfying assignment.
    pub fn model_value(&self, v: Var) -> bool {
        self.model.get(v as usize).copied().unwrap_or(false)
    }
}
