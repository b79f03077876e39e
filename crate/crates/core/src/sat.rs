//! A small CDCL SAT solver.
//!
//! - two-watched-literal unit propagation
//! - first-UIP conflict analysis with local clause minimization
//! - non-chronological backjumping
//! - activity-based branching (ties go to the lowest variable index) with phase saving
//! - geometric restarts and LBD-based learned clause deletion
//! - incremental solving under assumptions
//!
//! The solver is fully deterministic: identical clause insertion order,
//! assumptions and configuration yield identical verdicts and models.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// A signed reference to a boolean variable. Variables are numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    /// Builds a literal over `var` (which must be at least 1).
    pub fn new(var: u32, positive: bool) -> Lit {
        assert!(var >= 1, "variables are numbered from 1");
        Lit(((var - 1) << 1) | u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }

    /// Converts a nonzero DIMACS integer into a literal.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > u64::from(u32::MAX >> 1) {
            return None;
        }
        Some(Lit::new(value.unsigned_abs() as u32, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var());
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> u32 {
        (self.0 >> 1) + 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn var_index(self) -> usize {
        (self.0 >> 1) as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("literal {lit} refers to an unallocated variable (instance has {num_vars} variables)")]
    UnallocatedVar { lit: i64, num_vars: u32 },
}

/// A total assignment over variables `1..=num_vars`.
#[derive(Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn var_value(&self, var: u32) -> bool {
        self.values[(var - 1) as usize]
    }

    pub fn value(&self, lit: Lit) -> bool {
        self.values[lit.var_index()] == lit.is_positive()
    }

    pub fn satisfies_clause(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.value(l))
    }

    /// Checks the model clause by clause against every stored clause of `instance`.
    pub fn satisfies(&self, instance: &CnfInstance) -> bool {
        instance.num_vars() <= self.num_vars()
            && instance.clauses().iter().all(|c| self.satisfies_clause(c))
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.values.iter().enumerate().map(|(i, &b)| {
                if b {
                    i as i64 + 1
                } else {
                    -(i as i64 + 1)
                }
            }))
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat => None,
        }
    }

    pub fn into_model(self) -> Option<Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Conflicts before the first restart.
    pub restart_first: u64,
    /// Growth factor of the restart interval.
    pub restart_factor: f64,
    /// Activity decay applied after every conflict.
    pub var_decay: f64,
    /// Learned clauses with LBD at or below this value are never deleted.
    pub keep_lbd: u32,
    /// Lower bound on the learned-clause store size that triggers a reduction.
    pub min_reduce: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restart_first: 100,
            restart_factor: 1.5,
            var_decay: 0.95,
            keep_lbd: 4,
            min_reduce: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub reductions: u64,
    pub learned: u64,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

type CRef = u32;

#[derive(Debug, Clone)]
struct ClauseSlot {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

/// Binary max-heap of variable indices keyed by activity; ties favour the lower index.
#[derive(Debug, Clone, Default)]
struct VarOrder {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarOrder {
    fn grow(&mut self) {
        self.pos.push(NOT_IN_HEAP);
    }

    #[inline]
    fn before(activity: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (activity[a as usize], activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: u32, activity: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, activity);
    }

    fn increased(&mut self, v: u32, activity: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize], activity);
        }
    }

    fn pop(&mut self, activity: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::before(activity, v, p) {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::before(activity, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if !Self::before(activity, c, v) {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

enum SearchOutcome {
    Sat,
    Unsat,
    Restart,
}

/// A CNF formula together with the state of the solver working on it.
///
/// Clauses are normalized on insertion (duplicate literals removed, tautologies
/// dropped). Learned clauses survive across `solve` calls; they are implied by
/// the stored clauses alone, never by assumptions.
#[derive(Debug, Clone)]
pub struct CnfInstance {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    ok: bool,
    true_lit: Option<Lit>,
    config: SolverConfig,
    stats: SolverStats,

    // Engine state. Everything below is indexed by variable (`var_index`) or literal (`code`).
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    watches: Vec<Vec<Watcher>>,
    arena: Vec<ClauseSlot>,
    learnts: Vec<CRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    order: VarOrder,
    var_inc: f64,
    reduce_at: usize,
}

impl Default for CnfInstance {
    fn default() -> Self {
        CnfInstance::new()
    }
}

impl CnfInstance {
    pub fn new() -> Self {
        CnfInstance::with_config(SolverConfig::default())
    }

    pub fn with_config(config: SolverConfig) -> Self {
        CnfInstance {
            num_vars: 0,
            clauses: Vec::new(),
            ok: true,
            true_lit: None,
            reduce_at: config.min_reduce,
            config,
            stats: SolverStats::default(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            watches: Vec::new(),
            arena: Vec::new(),
            learnts: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            order: VarOrder::default(),
            var_inc: 1.0,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// The stored (normalized, non-learned) clauses in insertion order.
    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn num_learned(&self) -> usize {
        self.learnts.len()
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// False once an empty clause was added or derived; every later solve is UNSAT.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    /// Allocates a fresh, unconstrained variable and returns its index.
    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        let v = self.num_vars;
        self.values.push(UNDEF);
        self.values.push(UNDEF);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.level.push(0);
        self.reason.push(None);
        self.phase.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.order.grow();
        self.order.insert(v - 1, &self.activity);
        v
    }

    pub fn new_lit(&mut self) -> Lit {
        Lit::pos(self.new_var())
    }

    /// A literal fixed to true by a unit clause, allocated on first use.
    pub fn true_lit(&mut self) -> Lit {
        if let Some(t) = self.true_lit {
            return t;
        }
        let t = self.new_lit();
        self.add_clause(&[t]).expect("fresh variable");
        self.true_lit = Some(t);
        t
    }

    pub fn false_lit(&mut self) -> Lit {
        !self.true_lit()
    }

    pub fn constant(&mut self, value: bool) -> Lit {
        if value {
            self.true_lit()
        } else {
            self.false_lit()
        }
    }

    /// `Some(b)` when `lit` is the instance's constant literal (or its negation).
    pub fn const_value(&self, lit: Lit) -> Option<bool> {
        let t = self.true_lit?;
        if lit == t {
            Some(true)
        } else if lit == !t {
            Some(false)
        } else {
            None
        }
    }

    /// Adds a clause. Duplicate literals are removed and tautologies dropped;
    /// an empty clause makes the instance permanently unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SatError> {
        if let Some(&bad) = lits.iter().find(|l| l.var() > self.num_vars) {
            return Err(SatError::UnallocatedVar {
                lit: bad.to_dimacs(),
                num_vars: self.num_vars,
            });
        }
        let mut clause = lits.to_vec();
        clause.sort_unstable();
        clause.dedup();
        // x and !x have adjacent codes.
        if clause.windows(2).any(|w| w[0] == !w[1]) {
            return Ok(());
        }
        self.clauses.push(clause.clone());
        if !self.ok {
            return Ok(());
        }
        debug_assert_eq!(self.decision_level(), 0);

        // Simplify against the root-level assignment before attaching.
        if clause.iter().any(|&l| self.lit_value(l) == TRUE) {
            return Ok(());
        }
        clause.retain(|&l| self.lit_value(l) == UNDEF);
        match clause.len() {
            0 => self.ok = false,
            1 => self.enqueue(clause[0], None),
            _ => {
                self.attach(clause, false, 0);
            }
        }
        Ok(())
    }

    /// Solves the instance under the given assumptions.
    ///
    /// Panics if an assumption references an unallocated variable.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        for a in assumptions {
            assert!(
                a.var() <= self.num_vars,
                "assumption {a} refers to an unallocated variable"
            );
        }
        self.stats.solves += 1;
        if !self.ok {
            return SolveResult::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }

        let mut budget = self.config.restart_first as f64;
        loop {
            match self.search(budget as u64, assumptions) {
                SearchOutcome::Sat => {
                    let values = (0..self.num_vars as usize)
                        .map(|v| self.values[2 * v] == TRUE)
                        .collect();
                    self.cancel_until(0);
                    return SolveResult::Sat(Model { values });
                }
                SearchOutcome::Unsat => {
                    self.cancel_until(0);
                    return SolveResult::Unsat;
                }
                SearchOutcome::Restart => {
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                    budget *= self.config.restart_factor;
                }
            }
        }
    }

    fn search(&mut self, budget: u64, assumptions: &[Lit]) -> SearchOutcome {
        let mut conflicts = 0u64;
        let mut learnt = Vec::new();
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat;
                }
                let (bt_level, lbd) = self.analyze(confl, &mut learnt);
                self.cancel_until(bt_level);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt.clone(), true, lbd);
                    self.learnts.push(cref);
                    self.stats.learned += 1;
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= self.config.var_decay;
                if self.learnts.len() > self.reduce_at {
                    self.reduce_learnts();
                }
                continue;
            }

            if conflicts >= budget {
                return SearchOutcome::Restart;
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.lit_value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => return SearchOutcome::Unsat,
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(l) => l,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => return SearchOutcome::Sat,
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, None);
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        self.values[l.code()]
    }

    fn enqueue(&mut self, l: Lit, reason: Option<CRef>) {
        debug_assert_eq!(self.lit_value(l), UNDEF);
        self.values[l.code()] = TRUE;
        self.values[(!l).code()] = FALSE;
        let v = l.var_index();
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> CRef {
        debug_assert!(lits.len() >= 2);
        let cref = self.arena.len() as CRef;
        self.watches[(!lits[0]).code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.arena.push(ClauseSlot {
            lits,
            learnt,
            deleted: false,
            lbd,
        });
        cref
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var_index();
            self.values[l.code()] = UNDEF;
            self.values[(!l).code()] = UNDEF;
            self.reason[v] = None;
            self.phase[v] = l.is_positive();
            self.order.insert(v as u32, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.values[2 * v as usize] == UNDEF {
                return Some(Lit::new(v + 1, self.phase[v as usize]));
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v as u32, &self.activity);
    }

    /// Propagates all enqueued literals; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.values[w.blocker.code()] == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let clause = &mut self.arena[w.cref as usize];
                if clause.deleted {
                    continue;
                }
                let lits = &mut clause.lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.values[first.code()] == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                for k in 2..lits.len() {
                    if self.values[lits[k].code()] != FALSE {
                        lits.swap(1, k);
                        let watch = !lits[1];
                        self.watches[watch.code()].push(nw);
                        continue 'watchers;
                    }
                }
                ws[j] = nw;
                j += 1;
                if self.values[first.code()] == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    /// First-UIP analysis. Fills `out` with the learned clause (asserting literal
    /// first, a literal of the backjump level second) and returns the backjump
    /// level and the clause's LBD.
    fn analyze(&mut self, confl: CRef, out: &mut Vec<Lit>) -> (usize, u32) {
        out.clear();
        out.push(Lit(0));
        let current = self.decision_level() as u32;
        let mut pending = 0usize;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        let mut confl = Some(confl);

        loop {
            let cref = confl.expect("implied literal without a reason") as usize;
            let skip = usize::from(p.is_some());
            for k in skip..self.arena[cref].lits.len() {
                let q = self.arena[cref].lits[k];
                let v = q.var_index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        out.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var_index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var_index()];
            self.seen[lit.var_index()] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
        }
        out[0] = !p.unwrap();

        // Drop literals whose reason is entirely covered by the clause.
        let marked: Vec<Lit> = out.clone();
        let mut keep = 1;
        for k in 1..out.len() {
            let l = out[k];
            let redundant = match self.reason[l.var_index()] {
                None => false,
                Some(r) => self.arena[r as usize].lits[1..].iter().all(|q| {
                    let v = q.var_index();
                    self.seen[v] || self.level[v] == 0
                }),
            };
            if !redundant {
                out[keep] = l;
                keep += 1;
            }
        }
        out.truncate(keep);
        for l in marked {
            self.seen[l.var_index()] = false;
        }

        let bt_level = if out.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..out.len() {
                if self.level[out[k].var_index()] > self.level[out[max_i].var_index()] {
                    max_i = k;
                }
            }
            out.swap(1, max_i);
            self.level[out[1].var_index()] as usize
        };

        let mut levels: Vec<u32> = out.iter().map(|l| self.level[l.var_index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        (bt_level, levels.len() as u32)
    }

    fn locked(&self, cref: CRef) -> bool {
        let first = self.arena[cref as usize].lits[0];
        self.lit_value(first) == TRUE && self.reason[first.var_index()] == Some(cref)
    }

    /// Keeps low-LBD and locked clauses, deletes the worse half of the rest.
    fn reduce_learnts(&mut self) {
        self.stats.reductions += 1;
        let keep_lbd = self.config.keep_lbd;
        let (mut kept, mut rest): (Vec<CRef>, Vec<CRef>) = self
            .learnts
            .iter()
            .partition(|&&c| self.arena[c as usize].lbd <= keep_lbd || self.locked(c));
        // Worst first: highest LBD, then oldest.
        rest.sort_by_key(|&c| (std::cmp::Reverse(self.arena[c as usize].lbd), c));
        let delete = rest.len() / 2;
        for &c in &rest[..delete] {
            let slot = &mut self.arena[c as usize];
            slot.deleted = true;
            slot.lits = Vec::new();
        }
        kept.extend_from_slice(&rest[delete..]);
        kept.sort_unstable();
        self.learnts = kept;
        if delete > 0 {
            let arena = &self.arena;
            for ws in self.watches.iter_mut() {
                ws.retain(|w| !arena[w.cref as usize].deleted);
            }
        }
        let floor = (2 * self.clauses.len()).max(self.config.min_reduce);
        self.reduce_at = floor.max(self.learnts.len() + self.learnts.len() / 2);
        debug_assert!(self
            .arena
            .iter()
            .all(|c| c.deleted || !c.learnt || c.lits.len() >= 2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force_models(num_vars: u32, clauses: &[Vec<Lit>]) -> Vec<Vec<bool>> {
        assert!(num_vars <= 24, "enumeration is limited to 24 variables");
        let mut models = Vec::new();
        for bits in 0u64..(1u64 << num_vars) {
            let value = |l: Lit| ((bits >> (l.var() - 1)) & 1 == 1) == l.is_positive();
            if clauses.iter().all(|c| c.iter().any(|&l| value(l))) {
                models.push((0..num_vars).map(|v| (bits >> v) & 1 == 1).collect());
            }
        }
        models
    }

    fn vars(inst: &mut CnfInstance, n: u32) -> Vec<Lit> {
        (0..n).map(|_| inst.new_lit()).collect()
    }

    #[test]
    fn new_var_counts_up() {
        let mut inst = CnfInstance::new();
        assert_eq!(inst.new_var(), 1);
        inst.new_var();
        inst.new_var();
        assert_eq!(inst.new_var(), 4);
        inst.add_clause(&[Lit::pos(1), Lit::neg(4)]).unwrap();
        assert_eq!(inst.new_var(), 5);
    }

    #[test]
    fn literal_negation_is_an_involution() {
        let l = Lit::neg(7);
        assert_eq!(!!l, l);
        assert_eq!(l.var(), 7);
        assert!(!l.is_positive());
        assert_eq!(Lit::from_dimacs(-7), Some(l));
        assert_eq!(Lit::from_dimacs(0), None);
    }

    #[test]
    fn tautologies_and_duplicates_are_normalized() {
        let mut inst = CnfInstance::new();
        let v = vars(&mut inst, 2);
        inst.add_clause(&[v[0], !v[0]]).unwrap();
        assert_eq!(inst.num_clauses(), 0);
        inst.add_clause(&[v[0], v[1], v[0]]).unwrap();
        assert_eq!(inst.clauses(), &[vec![v[0], v[1]]]);
    }

    #[test]
    fn unallocated_variable_is_rejected() {
        let mut inst = CnfInstance::new();
        inst.new_var();
        let err = inst.add_clause(&[Lit::pos(2)]).unwrap_err();
        assert_eq!(
            err,
            SatError::UnallocatedVar {
                lit: 2,
                num_vars: 1
            }
        );
    }

    #[test]
    fn contradictory_units() {
        let mut inst = CnfInstance::new();
        let a = inst.new_lit();
        inst.add_clause(&[a]).unwrap();
        inst.add_clause(&[!a]).unwrap();
        assert_eq!(inst.solve(&[]), SolveResult::Unsat);
    }

    #[test]
    fn simple_implication() {
        let mut inst = CnfInstance::new();
        let v = vars(&mut inst, 2);
        inst.add_clause(&[v[0], v[1]]).unwrap();
        inst.add_clause(&[!v[0]]).unwrap();
        let m = inst.solve(&[]).into_model().unwrap();
        assert!(m.value(v[1]));
        assert!(!m.value(v[0]));
    }

    #[test]
    fn failing_assumption() {
        let mut inst = CnfInstance::new();
        let a = inst.new_lit();
        inst.add_clause(&[a]).unwrap();
        assert_eq!(inst.solve(&[!a]), SolveResult::Unsat);
        // the instance itself is still satisfiable
        assert!(inst.solve(&[]).is_sat());
    }

    #[test]
    fn empty_instance_is_sat() {
        let mut inst = CnfInstance::new();
        assert!(inst.solve(&[]).is_sat());
        inst.new_var();
        assert!(inst.solve(&[]).is_sat());
    }

    #[test]
    fn empty_clause_poisons_instance() {
        let mut inst = CnfInstance::new();
        inst.new_var();
        inst.add_clause(&[]).unwrap();
        assert!(!inst.is_ok());
        assert_eq!(inst.solve(&[]), SolveResult::Unsat);
    }

    fn pigeonhole(inst: &mut CnfInstance, holes: u32) {
        let pigeons = holes + 1;
        let x: Vec<Vec<Lit>> = (0..pigeons).map(|_| vars(inst, holes)).collect();
        for p in &x {
            inst.add_clause(p).unwrap();
        }
        for h in 0..holes as usize {
            for a in 0..pigeons as usize {
                for b in a + 1..pigeons as usize {
                    inst.add_clause(&[!x[a][h], !x[b][h]]).unwrap();
                }
            }
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        for holes in 2..7 {
            let mut inst = CnfInstance::new();
            pigeonhole(&mut inst, holes);
            assert_eq!(inst.solve(&[]), SolveResult::Unsat, "php({holes})");
        }
    }

    #[test]
    fn learned_clause_store_is_reduced() {
        let mut inst = CnfInstance::with_config(SolverConfig {
            min_reduce: 10,
            ..SolverConfig::default()
        });
        pigeonhole(&mut inst, 7);
        assert_eq!(inst.solve(&[]), SolveResult::Unsat);
        assert!(inst.stats().reductions > 0);
    }

    #[test]
    fn incremental_solving_keeps_answers_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let mut inst = CnfInstance::new();
            let v = vars(&mut inst, 10);
            let mut clauses = Vec::new();
            for _ in 0..30 {
                let c: Vec<Lit> = (0..3)
                    .map(|_| {
                        let l = v[rng.gen_range(0..10)];
                        if rng.gen() {
                            l
                        } else {
                            !l
                        }
                    })
                    .collect();
                inst.add_clause(&c).unwrap();
                clauses.push(c);
                let expected = !brute_force_models(10, &clauses).is_empty();
                let got = inst.solve(&[]);
                assert_eq!(got.is_sat(), expected);
                if let SolveResult::Sat(m) = got {
                    assert!(m.satisfies(&inst));
                }
            }
        }
    }

    #[test]
    fn deterministic_models() {
        let build = || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let mut inst = CnfInstance::new();
            let v = vars(&mut inst, 40);
            for _ in 0..150 {
                let c: Vec<Lit> = (0..3)
                    .map(|_| {
                        let l = v[rng.gen_range(0..40)];
                        if rng.gen() {
                            l
                        } else {
                            !l
                        }
                    })
                    .collect();
                inst.add_clause(&c).unwrap();
            }
            inst
        };
        let a = build().solve(&[]);
        let b = build().solve(&[]);
        assert_eq!(a, b);
    }
}
