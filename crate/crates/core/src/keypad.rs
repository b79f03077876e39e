//! Keypad chains: optimal numeric-pad plans, chunk-wise translation through
//! directional-control layers, and the complexity sum.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::search::{Derivation, LexObjective, MemoMin};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeypadError {
    #[error("key `{0}` is not on the pad")]
    UnknownKey(char),
    #[error("code `{0}` has no digits")]
    NoDigits(String),
    #[error("invalid plan symbol `{0}`")]
    BadSymbol(char),
    #[error("plan leaves the pad or enters the gap at step {0}")]
    OffPad(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    L,
    U,
    D,
    R,
    A,
}

impl Sym {
    pub const DIRS: [Sym; 4] = [Sym::L, Sym::U, Sym::D, Sym::R];

    fn delta(self) -> (i32, i32) {
        match self {
            Sym::L => (0, -1),
            Sym::U => (-1, 0),
            Sym::D => (1, 0),
            Sym::R => (0, 1),
            Sym::A => (0, 0),
        }
    }

    /// The directional-pad key that issues this symbol.
    pub fn key(self) -> char {
        match self {
            Sym::L => '<',
            Sym::U => '^',
            Sym::D => 'v',
            Sym::R => '>',
            Sym::A => 'A',
        }
    }

    pub fn from_char(c: char) -> Option<Sym> {
        match c {
            '<' | 'l' => Some(Sym::L),
            '^' | 'u' => Some(Sym::U),
            'v' | 'd' => Some(Sym::D),
            '>' | 'r' => Some(Sym::R),
            'A' => Some(Sym::A),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Plan(pub Vec<Sym>);

impl Plan {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.0
    }

    /// Number of direction changes, the first move counting as one.
    pub fn turns(&self) -> u64 {
        let mut prev = None;
        let mut turns = 0;
        for &s in &self.0 {
            if s == Sym::A {
                prev = None;
            } else {
                if prev != Some(s) {
                    turns += 1;
                }
                prev = Some(s);
            }
        }
        turns
    }

    pub fn objective(&self) -> LexObjective {
        LexObjective::new(self.0.len() as u64, self.turns())
    }

    /// The keys this plan presses on the directional pad it drives.
    pub fn keys(&self) -> String {
        self.0.iter().map(|s| s.key()).collect()
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.keys())
    }
}

impl FromStr for Plan {
    type Err = KeypadError;

    /// Accepts `<^v>A` or `ludrA` spellings.
    fn from_str(s: &str) -> Result<Plan, KeypadError> {
        s.chars()
            .map(|c| Sym::from_char(c).ok_or(KeypadError::BadSymbol(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Plan)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keypad {
    layout: HashMap<char, (i32, i32)>,
    rows: i32,
    cols: i32,
    gap: (i32, i32),
}

impl Keypad {
    fn from_rows(rows: &[&str]) -> Keypad {
        let mut layout = HashMap::new();
        let mut gap = (-1, -1);
        for (r, row) in rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                if ch == '.' {
                    gap = (r as i32, c as i32);
                } else {
                    layout.insert(ch, (r as i32, c as i32));
                }
            }
        }
        Keypad {
            layout,
            rows: rows.len() as i32,
            cols: rows[0].len() as i32,
            gap,
        }
    }

    pub fn numeric() -> Keypad {
        Keypad::from_rows(&["789", "456", "123", ".0A"])
    }

    pub fn directional() -> Keypad {
        Keypad::from_rows(&[".^A", "<v>"])
    }

    pub fn position(&self, key: char) -> Option<(i32, i32)> {
        self.layout.get(&key).copied()
    }

    pub fn gap(&self) -> (i32, i32) {
        self.gap
    }

    pub fn is_key(&self, p: (i32, i32)) -> bool {
        p != self.gap && (0..self.rows).contains(&p.0) && (0..self.cols).contains(&p.1)
    }

    pub fn key_at(&self, p: (i32, i32)) -> Option<char> {
        self.layout.iter().find(|(_, &q)| q == p).map(|(&k, _)| k)
    }

    /// Runs `plan` from the `A` key; returns the pressed keys.
    pub fn simulate(&self, plan: &Plan) -> Result<String, KeypadError> {
        let mut pos = self.layout[&'A'];
        let mut out = String::new();
        for (i, &s) in plan.0.iter().enumerate() {
            if s == Sym::A {
                out.push(self.key_at(pos).expect("arm is always on a key"));
            } else {
                let (dr, dc) = s.delta();
                pos = (pos.0 + dr, pos.1 + dc);
                if !self.is_key(pos) {
                    return Err(KeypadError::OffPad(i));
                }
            }
        }
        Ok(out)
    }
}

type PlanKey = (Option<Sym>, (i32, i32), Vec<(i32, i32)>);

/// Memoized plan search on one keypad. Keys are (previous direction, arm
/// position, remaining targets); entries are shared across calls.
pub struct PadPlanner {
    pad: Keypad,
    memo: MemoMin<PlanKey, Sym>,
}

impl PadPlanner {
    pub fn new(pad: Keypad) -> Self {
        PadPlanner {
            pad,
            memo: MemoMin::new(),
        }
    }

    pub fn pad(&self) -> &Keypad {
        &self.pad
    }

    /// A plan typing `keys` from the `A` key with least (length, turns).
    pub fn plan(&mut self, keys: &str) -> Result<Plan, KeypadError> {
        let targets = keys
            .chars()
            .map(|c| self.pad.position(c).ok_or(KeypadError::UnknownKey(c)))
            .collect::<Result<Vec<_>, _>>()?;
        let start: PlanKey = (None, self.pad.layout[&'A'], targets);
        let pad = &self.pad;
        let mut derive = |key: &PlanKey| derivations(pad, key);
        self.memo
            .solve(&start, &mut derive)
            .expect("moves strictly approach the target");
        Ok(Plan(self.memo.witness(&start).expect("solved")))
    }
}

fn derivations(pad: &Keypad, key: &PlanKey) -> Vec<Derivation<PlanKey, Sym>> {
    let (prev, pos, targets) = key;
    let Some(&target) = targets.first() else {
        return vec![Derivation {
            delta: LexObjective::ZERO,
            label: None,
            subkeys: vec![],
        }];
    };
    if *pos == target {
        return vec![Derivation {
            delta: LexObjective::new(1, 0),
            label: Some(Sym::A),
            subkeys: vec![(None, *pos, targets[1..].to_vec())],
        }];
    }
    let dist = |p: (i32, i32)| (p.0 - target.0).abs() + (p.1 - target.1).abs();
    Sym::DIRS
        .iter()
        .filter_map(|&d| {
            let (dr, dc) = d.delta();
            let next = (pos.0 + dr, pos.1 + dc);
            if !pad.is_key(next) || dist(next) >= dist(*pos) {
                return None;
            }
            let turn = u64::from(*prev != Some(d));
            Some(Derivation {
                delta: LexObjective::new(1, turn),
                label: Some(d),
                subkeys: vec![(Some(d), next, targets.clone())],
            })
        })
        .collect()
}

/// Splits off the first chunk: the leading non-`A` run plus the `A` run
/// after it, or just the leading `A` run when the plan starts with `A`.
pub fn extract_chunk(plan: &[Sym]) -> (&[Sym], &[Sym]) {
    let moves = plan.iter().take_while(|&&s| s != Sym::A).count();
    let presses = plan[moves..].iter().take_while(|&&s| s == Sym::A).count();
    plan.split_at(moves + presses)
}

/// Plans for a numeric pad driven through `levels` directional pads.
pub struct KeypadChain {
    numeric: PadPlanner,
    directional: PadPlanner,
    lengths: HashMap<(u32, Vec<Sym>), u64>,
}

impl Default for KeypadChain {
    fn default() -> Self {
        Self::new()
    }
}

impl KeypadChain {
    pub fn new() -> Self {
        KeypadChain {
            numeric: PadPlanner::new(Keypad::numeric()),
            directional: PadPlanner::new(Keypad::directional()),
            lengths: HashMap::new(),
        }
    }

    pub fn num_pad_plan(&mut self, code: &str) -> Result<Plan, KeypadError> {
        self.numeric.plan(code)
    }

    pub fn dir_pad_plan(&mut self, chunk: &[Sym]) -> Plan {
        let keys: String = chunk.iter().map(|s| s.key()).collect();
        self.directional
            .plan(&keys)
            .expect("every symbol is a directional key")
    }

    /// Length of the plan that the controller `levels` layers up must type
    /// to make the lowest pad execute `plan`.
    pub fn trans_plan_len(&mut self, levels: u32, plan: &[Sym]) -> u64 {
        if levels == 0 {
            return plan.len() as u64;
        }
        let mut total = 0;
        let mut rest = plan;
        while !rest.is_empty() {
            let (chunk, tail) = extract_chunk(rest);
            total += self.chunk_len(levels, chunk);
            rest = tail;
        }
        total
    }

    fn chunk_len(&mut self, levels: u32, chunk: &[Sym]) -> u64 {
        let key = (levels, chunk.to_vec());
        if let Some(&len) = self.lengths.get(&key) {
            return len;
        }
        let upper = self.dir_pad_plan(chunk);
        let len = self.trans_plan_len(levels - 1, &upper.0);
        self.lengths.insert(key, len);
        len
    }

    /// Human-controller sequence length for one code.
    pub fn code_len(&mut self, code: &str, levels: u32) -> Result<u64, KeypadError> {
        let plan = self.num_pad_plan(code)?;
        Ok(self.trans_plan_len(levels, &plan.0))
    }
}

pub fn numeric_part(code: &str) -> Result<u64, KeypadError> {
    let digits: String = code.chars().filter(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(KeypadError::NoDigits(code.to_string()));
    }
    Ok(digits.parse().unwrap_or(u64::MAX))
}

pub fn complexity_sum<S: AsRef<str>>(codes: &[S], levels: u32) -> Result<u64, KeypadError> {
    let mut chain = KeypadChain::new();
    let mut sum = 0;
    for code in codes {
        let code = code.as_ref();
        let n = numeric_part(code)?;
        sum += n * chain.code_len(code, levels)?;
    }
    Ok(sum)
}
