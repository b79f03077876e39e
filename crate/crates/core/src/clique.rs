//! Undirected networks of two-letter hosts: triangle counting and maximum
//! clique, by SAT and by Bron–Kerbosch.

use std::collections::HashMap;

use thiserror::Error;

use crate::encode::maximize_true_count;
use crate::sat::{CnfInstance, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("line {line}: expected `xx-yy`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: self-loop on `{name}`")]
    SelfLoop { line: usize, name: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Network {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<u64>>,
    edges: usize,
}

fn is_name(s: &str) -> bool {
    s.len() == 2 && s.bytes().all(|b| b.is_ascii_lowercase())
}

pub fn parse_network(text: &str) -> Result<Network, NetworkError> {
    let mut net = Network::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let malformed = || NetworkError::Malformed {
            line,
            text: t.to_string(),
        };
        let (a, b) = t.split_once('-').ok_or_else(malformed)?;
        if !is_name(a) || !is_name(b) {
            return Err(malformed());
        }
        if a == b {
            return Err(NetworkError::SelfLoop {
                line,
                name: a.to_string(),
            });
        }
        let i = net.add_vertex(a);
        let j = net.add_vertex(b);
        net.add_edge(i, j);
    }
    Ok(net)
}

impl Network {
    /// Returns the index of `name`, adding it if new.
    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        let words = (i + 1).div_ceil(64);
        for row in &mut self.adj {
            row.resize(words, 0);
        }
        self.adj.push(vec![0; words]);
        i
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "self-loop");
        if !self.adjacent(i, j) {
            self.adj[i][j / 64] |= 1 << (j % 64);
            self.adj[j][i / 64] |= 1 << (i % 64);
            self.edges += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.adjacent(i, j))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(k, &a)| vs[k + 1..].iter().all(|&b| a != b && self.adjacent(a, b)))
    }
}

/// Triangles with at least one vertex whose name starts with `t`.
pub fn count_t_triangles(net: &Network) -> usize {
    let n = net.len();
    let mut count = 0;
    for a in 0..n {
        for b in net.neighbors(a).filter(|&b| b > a) {
            for c in net.neighbors(b).filter(|&c| c > b) {
                if net.adjacent(a, c) && [a, b, c].iter().any(|&v| net.name(v).starts_with('t')) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// The clique encoding: one variable per vertex and a binary clause per
/// non-adjacent pair.
pub fn encode_clique(net: &Network) -> (CnfInstance, Vec<Lit>) {
    let mut inst = CnfInstance::new();
    let bs: Vec<Lit> = (0..net.len()).map(|_| inst.new_lit()).collect();
    for i in 0..net.len() {
        for j in i + 1..net.len() {
            if !net.adjacent(i, j) {
                inst.add_clause(&[!bs[i], !bs[j]]).expect("allocated");
            }
        }
    }
    (inst, bs)
}

/// Maximum clique by maximizing the number of selected vertices.
pub fn max_clique_sat(net: &Network) -> Vec<usize> {
    let (mut inst, bs) = encode_clique(net);
    max_clique_from(&mut inst, &bs)
}

/// Solves an already-built clique encoding.
pub fn max_clique_from(inst: &mut CnfInstance, bs: &[Lit]) -> Vec<usize> {
    let opt = maximize_true_count(inst, bs).expect("the empty selection satisfies every clause");
    (0..bs.len()).filter(|&i| opt.model.value(bs[i])).collect()
}

/// Maximum clique by Bron–Kerbosch with pivoting, pruned by the size bound.
pub fn bron_kerbosch(net: &Network) -> Vec<usize> {
    let words = net.len().div_ceil(64);
    let mut p = vec![0u64; words];
    for v in 0..net.len() {
        p[v / 64] |= 1 << (v % 64);
    }
    let mut best = Vec::new();
    let mut r = Vec::new();
    expand(net, &mut r, p, vec![0; words], &mut best);
    best
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(k, &w)| {
        (0..64)
            .filter(move |b| w >> b & 1 == 1)
            .map(move |b| k * 64 + b)
    })
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn expand(
    net: &Network,
    r: &mut Vec<usize>,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    best: &mut Vec<usize>,
) {
    let size = count(&p);
    if size == 0 {
        if count(&x) == 0 && r.len() > best.len() {
            *best = r.clone();
        }
        return;
    }
    if r.len() + size <= best.len() {
        return;
    }
    let pivot = members(&p)
        .chain(members(&x))
        .max_by_key(|&u| (count(&and(&p, &net.adj[u])), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let candidates: Vec<usize> = members(&p).filter(|&v| !net.adjacent(pivot, v)).collect();
    for v in candidates {
        r.push(v);
        expand(net, r, and(&p, &net.adj[v]), and(&x, &net.adj[v]), best);
        r.pop();
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
}

/// Names sorted and joined with commas.
pub fn password(net: &Network, set: &[usize]) -> String {
    let mut names: Vec<&str> = set.iter().map(|&i| net.name(i)).collect();
    names.sort_unstable();
    names.join(",")
}
