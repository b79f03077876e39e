//! Reference implementations used as oracles by the integration tests. Each
//! one is deliberately naive and shares no code with the library.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use aoc_core::sat::{CnfInstance, Lit, SolveResult};
use rand::Rng;

/// Random clauses as DIMACS integers over `1..=vars`.
pub fn random_cnf<R: Rng>(rng: &mut R, vars: u32, clauses: usize, max_len: usize) -> Vec<Vec<i64>> {
    (0..clauses)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| {
                    let v = i64::from(rng.gen_range(1..=vars));
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

pub fn satisfies(assign: u64, clause: &[i64]) -> bool {
    clause
        .iter()
        .any(|&l| (assign >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
}

/// First satisfying assignment in counting order, if any.
pub fn enumerate_sat(vars: u32, clauses: &[Vec<i64>]) -> Option<u64> {
    (0..1u64 << vars).find(|&a| clauses.iter().all(|c| satisfies(a, c)))
}

pub fn count_models(vars: u32, clauses: &[Vec<i64>]) -> usize {
    (0..1u64 << vars)
        .filter(|&a| clauses.iter().all(|c| satisfies(a, c)))
        .count()
}

pub fn lits(clause: &[i64]) -> Vec<Lit> {
    clause
        .iter()
        .map(|&l| Lit::from_dimacs(l).unwrap())
        .collect()
}

/// Assumption literals fixing `inputs` to the bits of `assign`.
pub fn fix(inputs: &[Lit], assign: u64) -> Vec<Lit> {
    inputs
        .iter()
        .enumerate()
        .map(|(i, &l)| if assign >> i & 1 == 1 { l } else { !l })
        .collect()
}

/// `Some(v)` when every model under `assumptions` gives `lit` the value `v`;
/// `None` when no model exists. Panics when `lit` is not determined.
pub fn forced(inst: &mut CnfInstance, assumptions: &[Lit], lit: Lit) -> Option<bool> {
    let mut with = assumptions.to_vec();
    with.push(lit);
    let can_true = inst.solve(&with).is_sat();
    *with.last_mut().unwrap() = !lit;
    let can_false = inst.solve(&with).is_sat();
    match (can_true, can_false) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        (false, false) => None,
        (true, true) => panic!("{lit:?} is not determined by {assumptions:?}"),
    }
}

pub fn sat_under(inst: &mut CnfInstance, assumptions: &[Lit]) -> bool {
    matches!(inst.solve(assumptions), SolveResult::Sat(_))
}

/// Single-source shortest paths by repeated relaxation over an explicit edge list.
pub fn bellman_ford(n: usize, edges: &[(usize, usize, i64)], src: usize) -> Vec<Option<i64>> {
    let mut dist = vec![None; n];
    dist[src] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in edges {
            if let Some(du) = dist[u] {
                if dist[v].is_none_or(|dv| du + w < dv) {
                    dist[v] = Some(du + w);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Random maze text with walls on the border and S, E on distinct open cells.
pub fn random_maze<R: Rng>(rng: &mut R, rows: usize, cols: usize, wall_p: f64) -> String {
    assert!(
        rows >= 3 && cols >= 3 && (rows - 2) * (cols - 2) >= 2,
        "interior too small for S and E"
    );
    let mut g = vec![vec!['#'; cols]; rows];
    let mut open = Vec::new();
    for r in 1..rows - 1 {
        for c in 1..cols - 1 {
            if !rng.gen_bool(wall_p) {
                g[r][c] = '.';
                open.push((r, c));
            }
        }
    }
    while open.len() < 2 {
        let (r, c) = (rng.gen_range(1..rows - 1), rng.gen_range(1..cols - 1));
        if g[r][c] == '#' {
            g[r][c] = '.';
            open.push((r, c));
        }
    }
    let s = rng.gen_range(0..open.len());
    let mut e = rng.gen_range(0..open.len() - 1);
    if e >= s {
        e += 1;
    }
    g[open[s].0][open[s].1] = 'S';
    g[open[e].0][open[e].1] = 'E';
    g.iter()
        .map(|row| row.iter().collect::<String>() + "\n")
        .collect()
}

/// Least cost by Bellman-Ford over poses, then every route of that cost
/// by depth-first enumeration of pose-simple paths, pruned by the exact
/// cost-to-go (Bellman-Ford on the reversed graph). Returns the cost and the
/// tiles on any optimal route.
pub fn enumerate_routes(text: &str) -> Option<(i64, HashSet<(usize, usize)>)> {
    let g: Vec<Vec<char>> = text.lines().map(|l| l.chars().collect()).collect();
    let (rows, cols) = (g.len(), g[0].len());
    let find = |ch| {
        (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .find(|&(r, c)| g[r][c] == ch)
            .unwrap()
    };
    let (s, e) = (find('S'), find('E'));
    // headings: 0 = N, 1 = E, 2 = S, 3 = W
    const D: [(i64, i64); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];
    let open = |r: i64, c: i64| {
        r >= 0
            && c >= 0
            && (r as usize) < rows
            && (c as usize) < cols
            && g[r as usize][c as usize] != '#'
    };
    let id = |r: usize, c: usize, h: usize| (r * cols + c) * 4 + h;
    let succ = |r: usize, c: usize, h: usize| {
        let mut out = vec![(r, c, (h + 1) % 4, 1000), (r, c, (h + 3) % 4, 1000)];
        let (nr, nc) = (r as i64 + D[h].0, c as i64 + D[h].1);
        if open(nr, nc) {
            out.push((nr as usize, nc as usize, h, 1));
        }
        out
    };
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if g[r][c] == '#' {
                continue;
            }
            for h in 0..4 {
                for (nr, nc, nh, w) in succ(r, c, h) {
                    edges.push((id(r, c, h), id(nr, nc, nh), w));
                }
            }
        }
    }
    let n = rows * cols * 4;
    let dist = bellman_ford(n, &edges, id(s.0, s.1, 1));
    let best = (0..4).filter_map(|h| dist[id(e.0, e.1, h)]).min()?;
    // Node n is a sink reached from every end pose at no cost.
    let mut reversed: Vec<(usize, usize, i64)> = edges.iter().map(|&(u, v, w)| (v, u, w)).collect();
    reversed.extend((0..4).map(|h| (n, id(e.0, e.1, h), 0)));
    let to_go = bellman_ford(n + 1, &reversed, n);

    let mut tiles = HashSet::new();
    let mut seen = HashSet::from([(s.0, s.1, 1)]);
    // Iterative DFS: each frame holds its successor list and the next index.
    let mut stack = vec![(s.0, s.1, 1usize, 0i64, succ(s.0, s.1, 1), 0usize)];
    while let Some(frame) = stack.last_mut() {
        let (r, c, h, cost) = (frame.0, frame.1, frame.2, frame.3);
        if (r, c) == e || frame.5 == frame.4.len() {
            if (r, c) == e && cost == best {
                tiles.extend(stack.iter().map(|f| (f.0, f.1)));
            }
            stack.pop();
            seen.remove(&(r, c, h));
            continue;
        }
        let (nr, nc, nh, w) = frame.4[frame.5];
        frame.5 += 1;
        let ncost = cost + w;
        let Some(rest) = to_go[id(nr, nc, nh)] else {
            continue;
        };
        if ncost + rest > best || !seen.insert((nr, nc, nh)) {
            continue;
        }
        stack.push((nr, nc, nh, ncost, succ(nr, nc, nh), 0));
    }
    Some((best, tiles))
}

/// Undirected G(n, p) with a clique planted on `k` random vertices; edges as names.
pub fn planted_graph<R: Rng>(rng: &mut R, n: usize, p: f64, k: usize) -> (String, Vec<String>) {
    let name = |i: usize| {
        let a = (b'a' + (i / 26) as u8) as char;
        let b = (b'a' + (i % 26) as u8) as char;
        format!("{a}{b}")
    };
    let mut members: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        members.swap(i, j);
    }
    let planted: HashSet<usize> = members[..k].iter().copied().collect();
    let mut text = String::new();
    for i in 0..n {
        for j in i + 1..n {
            if (planted.contains(&i) && planted.contains(&j)) || rng.gen_bool(p) {
                text.push_str(&format!("{}-{}\n", name(i), name(j)));
            }
        }
    }
    let mut names: Vec<String> = planted.iter().map(|&i| name(i)).collect();
    names.sort();
    (text, names)
}

/// Largest clique by enumerating all vertex subsets (n <= 20).
pub fn brute_max_clique(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> usize {
    assert!(n <= 20);
    let mut best = 0;
    for set in 0u32..1 << n {
        let size = set.count_ones() as usize;
        if size <= best {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&i| set >> i & 1 == 1).collect();
        if vs
            .iter()
            .enumerate()
            .all(|(k, &a)| vs[k + 1..].iter().all(|&b| adj(a, b)))
        {
            best = size;
        }
    }
    best
}

const NUMERIC: [&str; 4] = ["789", "456", "123", " 0A"];
const DIRECTIONAL: [&str; 2] = [" ^A", "<v>"];

fn pad_pos(pad: &[&str], key: char) -> (i32, i32) {
    for (r, row) in pad.iter().enumerate() {
        if let Some(c) = row.find(key) {
            return (r as i32, c as i32);
        }
    }
    panic!("no key {key}")
}

fn pad_key(pad: &[&str], p: (i32, i32)) -> Option<char> {
    let row = pad.get(usize::try_from(p.0).ok()?)?;
    let ch = row.chars().nth(usize::try_from(p.1).ok()?)?;
    (ch != ' ').then_some(ch)
}

/// Fewest human presses to type `code` through `layers` robot-held
/// directional pads, by breadth-first search over all arm positions.
pub fn keypad_bfs(code: &str, layers: usize) -> usize {
    let code: Vec<char> = code.chars().collect();
    // arms[0] is on the numeric pad, arms[1..] on directional pads.
    let mut start = vec![pad_pos(&NUMERIC, 'A')];
    start.extend((0..layers).map(|_| pad_pos(&DIRECTIONAL, 'A')));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([((start.clone(), 0usize), 0usize)]);
    seen.insert((start, 0usize));
    while let Some(((arms, done), dist)) = queue.pop_front() {
        if done == code.len() {
            return dist;
        }
        for key in ['<', '^', 'v', '>', 'A'] {
            let mut arms = arms.clone();
            let mut done = done;
            let mut level = layers;
            let mut key = key;
            let ok = loop {
                let pad: &[&str] = if level == 0 { &NUMERIC } else { &DIRECTIONAL };
                if key == 'A' {
                    let pressed = pad_key(pad, arms[level]).unwrap();
                    if level == 0 {
                        if pressed == code[done] {
                            done += 1;
                            break true;
                        }
                        break false;
                    }
                    key = pressed;
                    level -= 1;
                    continue;
                }
                let (dr, dc) = match key {
                    '<' => (0, -1),
                    '^' => (-1, 0),
                    'v' => (1, 0),
                    _ => (0, 1),
                };
                let next = (arms[level].0 + dr, arms[level].1 + dc);
                if pad_key(pad, next).is_none() {
                    break false;
                }
                arms[level] = next;
                break true;
            };
            if ok && seen.insert((arms.clone(), done)) {
                queue.push_back(((arms, done), dist + 1));
            }
        }
    }
    unreachable!("every code is typeable")
}

/// Evaluates a circuit text by repeated sweeps until no gate fires.
pub fn sweep_eval(text: &str, x: u64, y: u64) -> u64 {
    let mut val: HashMap<String, bool> = HashMap::new();
    let mut gates = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((lhs, out)) = line.split_once(" -> ") {
            let p: Vec<&str> = lhs.split(' ').collect();
            gates.push((
                p[0].to_string(),
                p[1].to_string(),
                p[2].to_string(),
                out.to_string(),
            ));
        } else {
            let (name, v) = line.split_once(": ").unwrap();
            val.insert(name.to_string(), v == "1");
        }
    }
    for k in val.keys().cloned().collect::<Vec<_>>() {
        let bit = |v: u64| k[1..].parse::<u32>().map(|i| v >> i & 1 == 1).unwrap();
        if k.starts_with('x') {
            val.insert(k.clone(), bit(x));
        } else if k.starts_with('y') {
            val.insert(k.clone(), bit(y));
        }
    }
    loop {
        let mut fired = false;
        for (a, op, b, out) in &gates {
            if val.contains_key(out) {
                continue;
            }
            if let (Some(&va), Some(&vb)) = (val.get(a), val.get(b)) {
                let v = match op.as_str() {
                    "AND" => va && vb,
                    "OR" => va || vb,
                    _ => va != vb,
                };
                val.insert(out.clone(), v);
                fired = true;
            }
        }
        if !fired {
            break;
        }
    }
    val.iter()
        .filter(|(k, &v)| k.starts_with('z') && v)
        .map(|(k, _)| 1u64 << k[1..].parse::<u32>().unwrap())
        .sum()
}

/// A circuit text compiled for bit-sliced evaluation: each wire carries 64
/// independent input cases in one word.
pub struct SlicedCircuit {
    // (a, op, b, out) over wire indices, in an order where inputs come first.
    order: Vec<(usize, char, usize, usize)>,
    wires: usize,
    x: Vec<usize>,
    y: Vec<usize>,
    z: Vec<usize>,
}

impl SlicedCircuit {
    /// `None` when some gate never fires (a cycle or an undriven input).
    pub fn compile(text: &str) -> Option<SlicedCircuit> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut id = |name: &str| {
            let n = ids.len();
            *ids.entry(name.to_string()).or_insert(n)
        };
        let mut known = HashSet::new();
        let mut pending = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((lhs, out)) = line.split_once(" -> ") {
                let p: Vec<&str> = lhs.split(' ').collect();
                pending.push((id(p[0]), p[1].chars().next().unwrap(), id(p[2]), id(out)));
            } else {
                known.insert(id(line.split_once(':').unwrap().0));
            }
        }
        let mut order = Vec::new();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&(a, op, b, out)| {
                if known.contains(&a) && known.contains(&b) {
                    order.push((a, op, b, out));
                    known.insert(out);
                    false
                } else {
                    true
                }
            });
            if pending.len() == before {
                return None;
            }
        }
        let bus = |prefix: char| {
            let mut v: Vec<(u32, usize)> = ids
                .iter()
                .filter(|(k, _)| k.starts_with(prefix) && k[1..].parse::<u32>().is_ok())
                .map(|(k, &i)| (k[1..].parse().unwrap(), i))
                .collect();
            v.sort_unstable();
            v.into_iter().map(|(_, i)| i).collect::<Vec<_>>()
        };
        Some(SlicedCircuit {
            order,
            wires: ids.len(),
            x: bus('x'),
            y: bus('y'),
            z: bus('z'),
        })
    }

    pub fn width(&self) -> usize {
        self.x.len()
    }

    /// z for each (x, y) pair; at most 64 pairs per call.
    pub fn eval(&self, cases: &[(u64, u64)]) -> Vec<u64> {
        assert!(cases.len() <= 64);
        let mut val = vec![0u64; self.wires];
        for (lane, &(x, y)) in cases.iter().enumerate() {
            for (i, &w) in self.x.iter().enumerate() {
                val[w] |= (x >> i & 1) << lane;
            }
            for (i, &w) in self.y.iter().enumerate() {
                val[w] |= (y >> i & 1) << lane;
            }
        }
        for &(a, op, b, out) in &self.order {
            val[out] = match op {
                'A' => val[a] & val[b],
                'O' => val[a] | val[b],
                _ => val[a] ^ val[b],
            };
        }
        (0..cases.len())
            .map(|lane| {
                self.z
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| (val[w] >> lane & 1) << i)
                    .sum()
            })
            .collect()
    }

    /// The first (x, y) with a wrong sum, checking every pair of `width`-bit inputs.
    pub fn first_wrong_sum(&self) -> Option<(u64, u64)> {
        let w = self.width();
        assert!(w <= 10, "exhaustive check is for small widths");
        let all: Vec<(u64, u64)> = (0..1u64 << w)
            .flat_map(|x| (0..1u64 << w).map(move |y| (x, y)))
            .collect();
        for chunk in all.chunks(64) {
            let z = self.eval(chunk);
            if let Some(k) = (0..chunk.len()).find(|&k| z[k] != chunk[k].0 + chunk[k].1) {
                return Some(chunk[k]);
            }
        }
        None
    }
}
