//! Least-cost search over implicit state graphs and memoized minimum-objective
//! recursion.
//!
//! Cyclic cost recursions go through [`dijkstra_all`] / [`dijkstra_goal`];
//! well-founded recursions that minimize a lexicographic objective go through
//! [`MemoMin`], which keeps one best answer (and a witness) per key.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Add;

use thiserror::Error;

pub type Cost = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("negative step cost {cost} from state {from}")]
    NegativeCost { cost: Cost, from: String },
    #[error("recursion cycle through key {0}")]
    Cycle(String),
}

/// Least cost per reachable state, with predecessor links for path recovery.
#[derive(Debug, Clone)]
pub struct CostTable<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    cost: Vec<Cost>,
    pred: Vec<Option<usize>>,
}

impl<S: Clone + Eq + Hash> CostTable<S> {
    pub fn cost(&self, state: &S) -> Option<Cost> {
        self.index.get(state).map(|&i| self.cost[i])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// States in settle order, with their costs.
    pub fn iter(&self) -> impl Iterator<Item = (&S, Cost)> {
        self.states.iter().zip(self.cost.iter().copied())
    }

    /// The witness path from a source to `state`, source first.
    pub fn path_to(&self, state: &S) -> Option<Vec<S>> {
        let mut i = *self.index.get(state)?;
        let mut path = vec![self.states[i].clone()];
        while let Some(p) = self.pred[i] {
            path.push(self.states[p].clone());
            i = p;
        }
        path.reverse();
        Some(path)
    }
}

struct Frontier<S> {
    heap: BinaryHeap<Reverse<(Cost, u64, usize)>>,
    seq: u64,
    best: Vec<Cost>,
    done: Vec<bool>,
    table: CostTable<S>,
}

impl<S: Clone + Eq + Hash + Debug> Frontier<S> {
    fn new() -> Self {
        Frontier {
            heap: BinaryHeap::new(),
            seq: 0,
            best: Vec::new(),
            done: Vec::new(),
            table: CostTable {
                states: Vec::new(),
                index: HashMap::new(),
                cost: Vec::new(),
                pred: Vec::new(),
            },
        }
    }

    fn relax(&mut self, state: S, cost: Cost, pred: Option<usize>) {
        let i = match self.table.index.entry(state) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let i = self.table.states.len();
                self.table.states.push(e.key().clone());
                e.insert(i);
                self.table.cost.push(Cost::MAX);
                self.table.pred.push(None);
                self.best.push(Cost::MAX);
                self.done.push(false);
                i
            }
        };
        if !self.done[i] && cost < self.best[i] {
            self.best[i] = cost;
            self.table.pred[i] = pred;
            self.heap.push(Reverse((cost, self.seq, i)));
            self.seq += 1;
        }
    }

    /// Settles the next state; returns its index.
    fn settle_next<F>(&mut self, expand: &mut F) -> Result<Option<usize>, SearchError>
    where
        F: FnMut(&S) -> Vec<(S, Cost)>,
    {
        while let Some(Reverse((cost, _, i))) = self.heap.pop() {
            if self.done[i] || cost > self.best[i] {
                continue;
            }
            self.done[i] = true;
            self.table.cost[i] = cost;
            let state = self.table.states[i].clone();
            for (next, step) in expand(&state) {
                if step < 0 {
                    return Err(SearchError::NegativeCost {
                        cost: step,
                        from: format!("{state:?}"),
                    });
                }
                self.relax(next, cost + step, Some(i));
            }
            return Ok(Some(i));
        }
        Ok(None)
    }

    /// Drops states that were discovered but never settled.
    fn finish(mut self) -> CostTable<S> {
        let mut order: Vec<usize> = (0..self.table.states.len())
            .filter(|&i| self.done[i])
            .collect();
        order.sort_by_key(|&i| (self.table.cost[i], i));
        let mut remap = vec![usize::MAX; self.table.states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let states: Vec<S> = order
            .iter()
            .map(|&i| self.table.states[i].clone())
            .collect();
        let index = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let cost = order.iter().map(|&i| self.table.cost[i]).collect();
        let pred = order
            .iter()
            .map(|&i| self.table.pred[i].map(|p| remap[p]))
            .collect();
        self.table = CostTable {
            states,
            index,
            cost,
            pred,
        };
        self.table
    }
}

/// Minimum cost from any source to every reachable state.
pub fn dijkstra_all<S, I, F>(sources: I, mut expand: F) -> Result<CostTable<S>, SearchError>
where
    S: Clone + Eq + Hash + Debug,
    I: IntoIterator<Item = (S, Cost)>,
    F: FnMut(&S) -> Vec<(S, Cost)>,
{
    let mut frontier = Frontier::new();
    for (s, c) in sources {
        if c < 0 {
            return Err(SearchError::NegativeCost {
                cost: c,
                from: format!("{s:?}"),
            });
        }
        frontier.relax(s, c, None);
    }
    while frontier.settle_next(&mut expand)?.is_some() {}
    Ok(frontier.finish())
}

/// Least cost to the first settled goal state, with one witnessing path.
pub fn dijkstra_goal<S, I, F, G>(
    sources: I,
    mut expand: F,
    mut is_goal: G,
) -> Result<Option<(Cost, Vec<S>)>, SearchError>
where
    S: Clone + Eq + Hash + Debug,
    I: IntoIterator<Item = (S, Cost)>,
    F: FnMut(&S) -> Vec<(S, Cost)>,
    G: FnMut(&S) -> bool,
{
    let mut frontier = Frontier::new();
    for (s, c) in sources {
        if c < 0 {
            return Err(SearchError::NegativeCost {
                cost: c,
                from: format!("{s:?}"),
            });
        }
        frontier.relax(s, c, None);
    }
    while let Some(i) = frontier.settle_next(&mut expand)? {
        if is_goal(&frontier.table.states[i]) {
            let cost = frontier.table.cost[i];
            let mut path = vec![frontier.table.states[i].clone()];
            let mut cur = i;
            while let Some(p) = frontier.table.pred[cur] {
                path.push(frontier.table.states[p].clone());
                cur = p;
            }
            path.reverse();
            return Ok(Some((cost, path)));
        }
    }
    Ok(None)
}

/// A (length, turns) pair ordered lexicographically.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexObjective {
    pub len: u64,
    pub turns: u64,
}

impl LexObjective {
    pub const ZERO: LexObjective = LexObjective { len: 0, turns: 0 };

    pub fn new(len: u64, turns: u64) -> Self {
        LexObjective { len, turns }
    }
}

impl Add for LexObjective {
    type Output = LexObjective;

    fn add(self, rhs: LexObjective) -> LexObjective {
        LexObjective {
            len: self.len + rhs.len,
            turns: self.turns + rhs.turns,
        }
    }
}

/// One way of deriving an answer for a key: a local objective contribution,
/// an optional emitted symbol, and the subkeys whose answers are appended.
#[derive(Debug, Clone)]
pub struct Derivation<K, L> {
    pub delta: LexObjective,
    pub label: Option<L>,
    pub subkeys: Vec<K>,
}

#[derive(Debug, Clone)]
struct Answer<K, L> {
    objective: LexObjective,
    label: Option<L>,
    subkeys: Vec<K>,
}

/// Memoized minimization: each key maps to the lexicographically least
/// objective over all its derivations. On ties the earliest derivation wins.
#[derive(Debug, Clone)]
pub struct MemoMin<K, L> {
    table: HashMap<K, Answer<K, L>>,
    hits: u64,
}

impl<K, L> Default for MemoMin<K, L> {
    fn default() -> Self {
        MemoMin {
            table: HashMap::new(),
            hits: 0,
        }
    }
}

impl<K, L> MemoMin<K, L>
where
    K: Clone + Eq + Hash + Debug,
    L: Clone,
{
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of lookups answered from the table.
    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn clear(&mut self) {
        self.table.clear();
        self.hits = 0;
    }

    pub fn get(&self, key: &K) -> Option<LexObjective> {
        self.table.get(key).map(|a| a.objective)
    }

    pub fn solve<F>(&mut self, key: &K, derive: &mut F) -> Result<LexObjective, SearchError>
    where
        F: FnMut(&K) -> Vec<Derivation<K, L>>,
    {
        let mut active = HashSet::new();
        self.solve_inner(key, derive, &mut active)
    }

    fn solve_inner<F>(
        &mut self,
        key: &K,
        derive: &mut F,
        active: &mut HashSet<K>,
    ) -> Result<LexObjective, SearchError>
    where
        F: FnMut(&K) -> Vec<Derivation<K, L>>,
    {
        if let Some(a) = self.table.get(key) {
            self.hits += 1;
            return Ok(a.objective);
        }
        if !active.insert(key.clone()) {
            return Err(SearchError::Cycle(format!("{key:?}")));
        }
        let mut best: Option<Answer<K, L>> = None;
        for d in derive(key) {
            let mut objective = d.delta;
            for sub in &d.subkeys {
                objective = objective + self.solve_inner(sub, derive, active)?;
            }
            if best.as_ref().is_none_or(|b| objective < b.objective) {
                best = Some(Answer {
                    objective,
                    label: d.label,
                    subkeys: d.subkeys,
                });
            }
        }
        active.remove(key);
        let answer =
            best.ok_or_else(|| SearchError::Cycle(format!("{key:?} has no derivation")))?;
        let objective = answer.objective;
        self.table.insert(key.clone(), answer);
        Ok(objective)
    }

    /// The witness of a solved key: labels of the chosen derivations, in order.
    pub fn witness(&self, key: &K) -> Option<Vec<L>> {
        let mut out = Vec::new();
        let mut stack = vec![key.clone()];
        while let Some(k) = stack.pop() {
            let a = self.table.get(&k)?;
            if let Some(l) = &a.label {
                out.push(l.clone());
            }
            stack.extend(a.subkeys.iter().rev().cloned());
        }
        Some(out)
    }
}
