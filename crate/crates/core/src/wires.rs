//! Gate circuits over named wires: evaluation, a faulty-adder generator, and
//! repair of swapped gate outputs by SAT or by structural inspection.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitvec::{self, BitVec};
use crate::encode::{all_different, fd_less, fd_var, gate_and, gate_or, gate_xor, FdVar};
use crate::sat::{CnfInstance, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: malformed `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown gate `{op}`")]
    UnknownOp { line: usize, op: String },
    #[error("wire `{0}` is driven more than once")]
    DoublyDriven(String),
    #[error("wire `{0}` is on a combinational cycle")]
    Cycle(String),
    #[error("wire `{0}` has no driver and no initial value")]
    Undriven(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WiresError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("not an adder: {0}")]
    NotAnAdder(String),
    #[error("need at least {needed} gates for {pairs} pairs, have {gates}")]
    TooFewGates {
        needed: usize,
        pairs: usize,
        gates: usize,
    },
    #[error("no consistent swap set")]
    NoConsistentSwapSet,
    #[error("gave up after {0} refinement rounds")]
    RoundLimit(usize),
    #[error("generator needs at least 2 bits and at most 63, got {0}")]
    Bits(usize),
    #[error("could not draw a valid swap set after {0} attempts")]
    Retries(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    And,
    Or,
    Xor,
}

impl Op {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Op::And => a & b,
            Op::Or => a | b,
            Op::Xor => a ^ b,
        }
    }

    fn parse(s: &str) -> Option<Op> {
        match s {
            "AND" => Some(Op::And),
            "OR" => Some(Op::Or),
            "XOR" => Some(Op::Xor),
            _ => None,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::And => "AND",
            Op::Or => "OR",
            Op::Xor => "XOR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub op: Op,
    pub a: usize,
    pub b: usize,
    pub out: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    names: Vec<String>,
    ids: HashMap<String, usize>,
    init: Vec<Option<bool>>,
    gates: Vec<Gate>,
    driver: Vec<Option<usize>>,
}

/// `x07` → `Some(('x', 7))`.
fn indexed(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let c = chars.next()?;
    let rest = chars.as_str();
    if !matches!(c, 'x' | 'y' | 'z') || rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    Some((c, rest.parse().ok()?))
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut c = Circuit {
        names: Vec::new(),
        ids: HashMap::new(),
        init: Vec::new(),
        gates: Vec::new(),
        driver: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let malformed = || CircuitError::Malformed {
            line,
            text: t.to_string(),
        };
        if let Some((lhs, out)) = t.split_once("->") {
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            let out = out.trim();
            if parts.len() != 3 || out.is_empty() || out.contains(char::is_whitespace) {
                return Err(malformed());
            }
            let op = Op::parse(parts[1]).ok_or_else(|| CircuitError::UnknownOp {
                line,
                op: parts[1].to_string(),
            })?;
            let a = c.wire(parts[0]);
            let b = c.wire(parts[2]);
            let o = c.wire(out);
            if c.driver[o].is_some() || c.init[o].is_some() {
                return Err(CircuitError::DoublyDriven(out.to_string()));
            }
            c.driver[o] = Some(c.gates.len());
            c.gates.push(Gate { op, a, b, out: o });
        } else {
            let (name, value) = t.split_once(':').ok_or_else(malformed)?;
            let name = name.trim();
            let value = match value.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(malformed()),
            };
            if name.is_empty() {
                return Err(malformed());
            }
            let w = c.wire(name);
            if c.driver[w].is_some() || c.init[w].is_some() {
                return Err(CircuitError::DoublyDriven(name.to_string()));
            }
            c.init[w] = Some(value);
        }
    }
    c.topo_order()?;
    Ok(c)
}

/// The wire list from a `# answer:` line, if the text has one.
pub fn parse_answer_line(text: &str) -> Option<Vec<String>> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix("# answer:")?;
        Some(
            rest.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect(),
        )
    })
}

impl Circuit {
    fn wire(&mut self, name: &str) -> usize {
        if let Some(&w) = self.ids.get(name) {
            return w;
        }
        let w = self.names.len();
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), w);
        self.init.push(None);
        self.driver.push(None);
        w
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn wire_name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn wire_id(&self, name: &str) -> Option<usize> {
        self.ids.get(name).copied()
    }

    pub fn driver(&self, w: usize) -> Option<usize> {
        self.driver[w]
    }

    /// Wires named `<prefix>NN`, ordered by index; gaps are an error.
    fn bus(&self, prefix: char) -> Result<Vec<usize>, WiresError> {
        let mut bus: Vec<(usize, usize)> = self
            .names
            .iter()
            .enumerate()
            .filter_map(|(w, n)| {
                indexed(n)
                    .filter(|&(c, _)| c == prefix)
                    .map(|(_, i)| (i, w))
            })
            .collect();
        bus.sort_unstable();
        for (k, &(i, _)) in bus.iter().enumerate() {
            if i != k {
                return Err(WiresError::NotAnAdder(format!(
                    "`{prefix}` bus skips bit {k}"
                )));
            }
        }
        Ok(bus.into_iter().map(|(_, w)| w).collect())
    }

    /// Input width: the number of `x` wires.
    pub fn input_width(&self) -> usize {
        self.bus('x').map_or(0, |b| b.len())
    }

    /// Gate indices in dependency order.
    pub fn topo_order(&self) -> Result<Vec<usize>, CircuitError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.gates.len()];
        let mut order = Vec::with_capacity(self.gates.len());
        for root in 0..self.gates.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (g, ref mut next)) = stack.last_mut() {
                let ins = [self.gates[g].a, self.gates[g].b];
                if *next < 2 {
                    let w = ins[*next];
                    *next += 1;
                    if let Some(h) = self.driver[w] {
                        match state[h] {
                            0 => {
                                state[h] = 1;
                                stack.push((h, 0));
                            }
                            1 => return Err(CircuitError::Cycle(self.names[w].clone())),
                            _ => {}
                        }
                    }
                } else {
                    state[g] = 2;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Evaluates all wires from the given input assignment.
    fn evaluate(&self, inputs: &[Option<bool>]) -> Result<Vec<bool>, CircuitError> {
        let order = self.topo_order()?;
        let mut val: Vec<Option<bool>> = inputs.to_vec();
        for g in order {
            let gate = self.gates[g];
            let get =
                |w: usize| val[w].ok_or_else(|| CircuitError::Undriven(self.names[w].clone()));
            let v = gate.op.apply(get(gate.a)?, get(gate.b)?);
            val[gate.out] = Some(v);
        }
        Ok(val.into_iter().map(|v| v.unwrap_or(false)).collect())
    }

    fn z_value(&self, val: &[bool]) -> u64 {
        let mut z = 0u64;
        for (w, n) in self.names.iter().enumerate() {
            if let Some(('z', i)) = indexed(n) {
                if val[w] && i < 64 {
                    z |= 1 << i;
                }
            }
        }
        z
    }

    /// A copy with the outputs of each gate pair exchanged.
    pub fn with_swaps(&self, pairs: &[(usize, usize)]) -> Circuit {
        let mut c = self.clone();
        for &(g, h) in pairs {
            let (og, oh) = (c.gates[g].out, c.gates[h].out);
            c.gates[g].out = oh;
            c.gates[h].out = og;
            c.driver[oh] = Some(g);
            c.driver[og] = Some(h);
        }
        c
    }

    /// Renders the circuit in its input format (initial values, then gates).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (w, v) in self.init.iter().enumerate() {
            if let Some(v) = v {
                writeln!(out, "{}: {}", self.names[w], u8::from(*v)).unwrap();
            }
        }
        out.push('\n');
        for g in &self.gates {
            writeln!(
                out,
                "{} {} {} -> {}",
                self.names[g.a], g.op, self.names[g.b], self.names[g.out]
            )
            .unwrap();
        }
        out
    }
}

/// `z` under the circuit's own initial values.
pub fn eval_circuit(c: &Circuit) -> Result<u64, CircuitError> {
    let val = c.evaluate(&c.init)?;
    Ok(c.z_value(&val))
}

/// `z` with the `x` and `y` buses set from integers (other initial values kept).
pub fn eval_with(c: &Circuit, x: u64, y: u64) -> Result<u64, CircuitError> {
    let mut inputs = c.init.clone();
    for (w, n) in c.names.iter().enumerate() {
        match indexed(n) {
            Some(('x', i)) if c.driver[w].is_none() => inputs[w] = Some(i < 64 && x >> i & 1 == 1),
            Some(('y', i)) if c.driver[w].is_none() => inputs[w] = Some(i < 64 && y >> i & 1 == 1),
            _ => {}
        }
    }
    let val = c.evaluate(&inputs)?;
    Ok(c.z_value(&val))
}

struct AdderShape {
    x: Vec<usize>,
    y: Vec<usize>,
    z: Vec<usize>,
}

fn adder_shape(c: &Circuit) -> Result<AdderShape, WiresError> {
    let x = c.bus('x')?;
    let y = c.bus('y')?;
    let z = c.bus('z')?;
    if x.is_empty() || x.len() != y.len() {
        return Err(WiresError::NotAnAdder(format!(
            "{} x bits vs {} y bits",
            x.len(),
            y.len()
        )));
    }
    if x.len() > 63 {
        return Err(WiresError::NotAnAdder(format!(
            "{} input bits exceed 63",
            x.len()
        )));
    }
    if z.len() != x.len() + 1 {
        return Err(WiresError::NotAnAdder(format!(
            "{} input bits need {} z bits, found {}",
            x.len(),
            x.len() + 1,
            z.len()
        )));
    }
    for &w in x.iter().chain(&y) {
        if c.driver[w].is_some() {
            return Err(WiresError::NotAnAdder(format!(
                "input `{}` is gate-driven",
                c.names[w]
            )));
        }
    }
    for &w in &z {
        if c.driver[w].is_none() {
            return Err(WiresError::NotAnAdder(format!(
                "output `{}` has no gate",
                c.names[w]
            )));
        }
    }
    Ok(AdderShape { x, y, z })
}

/// Whether `c` adds correctly: exhaustively up to 8 input bits, else on
/// `samples` random inputs.
pub fn check_adder<R: Rng>(
    c: &Circuit,
    rng: &mut R,
    samples: usize,
) -> Result<Option<(u64, u64)>, CircuitError> {
    let w = c.input_width();
    let mask = (1u64 << w) - 1;
    let check = |x: u64, y: u64| -> Result<bool, CircuitError> { Ok(eval_with(c, x, y)? == x + y) };
    if w <= 8 {
        for x in 0..=mask {
            for y in 0..=mask {
                if !check(x, y)? {
                    return Ok(Some((x, y)));
                }
            }
        }
    } else {
        for _ in 0..samples {
            let (x, y) = (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask);
            if !check(x, y)? {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// n! / (2^k · k! · (n − 2k)!): the number of ways to pick k disjoint unordered pairs.
pub fn swap_space_size(n: u64, k: u64) -> Result<BigUint, WiresError> {
    if n < 2 * k {
        return Err(WiresError::TooFewGates {
            needed: 2 * k as usize,
            pairs: k as usize,
            gates: n as usize,
        });
    }
    let mut num = BigUint::from(1u32);
    for i in (n - 2 * k + 1)..=n {
        num *= i;
    }
    let mut den = BigUint::from(1u32) << k as usize;
    for i in 1..=k {
        den *= i;
    }
    Ok(num / den)
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub circuit: Circuit,
    pub text: String,
    /// Swapped output wires, sorted.
    pub answer: Vec<String>,
}

fn random_name<R: Rng>(rng: &mut R, used: &mut HashSet<String>) -> String {
    loop {
        let first = loop {
            let c = rng.gen_range(b'a'..=b'z');
            if !matches!(c, b'x' | b'y' | b'z') {
                break c as char;
            }
        };
        let name: String = std::iter::once(first)
            .chain((0..2).map(|_| rng.gen_range(b'a'..=b'z') as char))
            .collect();
        if used.insert(name.clone()) {
            return name;
        }
    }
}

/// A ripple-carry adder of `bits` input bits with the outputs of `pairs`
/// disjoint gate pairs exchanged. Each pair must change the circuit's function
/// and keep it acyclic.
pub fn gen_instance(bits: usize, pairs: usize, seed: u64) -> Result<GeneratedInstance, WiresError> {
    const RETRIES: usize = 1000;
    if !(2..=63).contains(&bits) {
        return Err(WiresError::Bits(bits));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = HashSet::new();
    let mut lines: Vec<(String, Op, String, String)> = Vec::new();
    let x = |i: usize| format!("x{i:02}");
    let y = |i: usize| format!("y{i:02}");
    let z = |i: usize| format!("z{i:02}");

    let mut carry = random_name(&mut rng, &mut used);
    lines.push((x(0), Op::Xor, y(0), z(0)));
    lines.push((x(0), Op::And, y(0), carry.clone()));
    for i in 1..bits {
        let s = random_name(&mut rng, &mut used);
        let a = random_name(&mut rng, &mut used);
        let b = random_name(&mut rng, &mut used);
        let c = if i + 1 == bits {
            z(bits)
        } else {
            random_name(&mut rng, &mut used)
        };
        lines.push((x(i), Op::Xor, y(i), s.clone()));
        lines.push((s.clone(), Op::Xor, carry.clone(), z(i)));
        lines.push((x(i), Op::And, y(i), a.clone()));
        lines.push((s, Op::And, carry, b.clone()));
        lines.push((a, Op::Or, b, c.clone()));
        carry = c;
    }
    lines.shuffle(&mut rng);
    for l in &mut lines {
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut l.0, &mut l.2);
        }
    }

    let mut text = String::new();
    let xv: u64 = rng.gen::<u64>() & ((1 << bits) - 1);
    let yv: u64 = rng.gen::<u64>() & ((1 << bits) - 1);
    for i in 0..bits {
        writeln!(text, "{}: {}", x(i), xv >> i & 1).unwrap();
    }
    for i in 0..bits {
        writeln!(text, "{}: {}", y(i), yv >> i & 1).unwrap();
    }
    text.push('\n');
    for (a, op, b, o) in &lines {
        writeln!(text, "{a} {op} {b} -> {o}").unwrap();
    }
    let correct = parse_circuit(&text)?;
    let n = correct.num_gates();
    if n < 2 * pairs {
        return Err(WiresError::TooFewGates {
            needed: 2 * pairs,
            pairs,
            gates: n,
        });
    }

    let consumers = |c: &Circuit, w: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..c.num_gates())
            .filter(|&g| c.gates[g].a == w || c.gates[g].b == w)
            .collect();
        v.sort_unstable();
        v
    };
    let indices: Vec<usize> = (0..n).collect();
    for _ in 0..RETRIES {
        let picked: Vec<usize> = indices
            .choose_multiple(&mut rng, 2 * pairs)
            .copied()
            .collect();
        let swaps: Vec<(usize, usize)> = picked.chunks(2).map(|p| (p[0], p[1])).collect();
        // Outputs with the same consumers are interchangeable.
        if swaps.iter().any(|&(g, h)| {
            consumers(&correct, correct.gates[g].out) == consumers(&correct, correct.gates[h].out)
        }) {
            continue;
        }
        let faulty = correct.with_swaps(&swaps);
        if faulty.topo_order().is_err() {
            continue;
        }
        if pairs > 0 && check_adder(&faulty, &mut rng, 1000)?.is_none() {
            continue;
        }
        let mut answer: Vec<String> = picked
            .iter()
            .map(|&g| correct.names[correct.gates[g].out].clone())
            .collect();
        answer.sort();
        let mut text = faulty.to_text();
        writeln!(text, "# answer: {}", answer.join(",")).unwrap();
        return Ok(GeneratedInstance {
            circuit: faulty,
            text,
            answer,
        });
    }
    Err(WiresError::Retries(RETRIES))
}

/// Training count used when none is given.
pub fn default_trainings(bits: usize, pairs: usize) -> usize {
    (3 * pairs).max(40.min((40 * bits).div_ceil(45)))
}

/// Incremental encoding of "some assignment of gates to 2k swap slots makes
/// the circuit add correctly on every training input".
pub struct SwapEncoding<'c> {
    circuit: &'c Circuit,
    shape: AdderShape,
    instance: CnfInstance,
    slots: Vec<FdVar>,
    trainings: usize,
}

impl<'c> SwapEncoding<'c> {
    pub fn new(circuit: &'c Circuit, pairs: usize) -> Result<Self, WiresError> {
        let shape = adder_shape(circuit)?;
        let n = circuit.num_gates();
        if n < 2 * pairs {
            return Err(WiresError::TooFewGates {
                needed: 2 * pairs,
                pairs,
                gates: n,
            });
        }
        let mut instance = CnfInstance::new();
        let mut slots = Vec::with_capacity(2 * pairs);
        for _ in 0..2 * pairs {
            slots.push(fd_var(&mut instance, n).expect("n >= 2"));
        }
        all_different(&mut instance, &slots).expect("same domain");
        for p in 0..pairs {
            fd_less(&mut instance, &slots[2 * p], &slots[2 * p + 1]).expect("same domain");
            if p > 0 {
                fd_less(&mut instance, &slots[2 * (p - 1)], &slots[2 * p]).expect("same domain");
            }
        }
        Ok(SwapEncoding {
            circuit,
            shape,
            instance,
            slots,
            trainings: 0,
        })
    }

    pub fn instance(&self) -> &CnfInstance {
        &self.instance
    }

    pub fn num_trainings(&self) -> usize {
        self.trainings
    }

    pub fn add_training(&mut self, x: u64, y: u64) {
        let c = self.circuit;
        let inst = &mut self.instance;
        let k2 = self.slots.len();
        let mut val: Vec<Option<Lit>> = vec![None; c.names.len()];
        for (i, &w) in self.shape.x.iter().enumerate() {
            val[w] = Some(inst.constant(x >> i & 1 == 1));
        }
        for (i, &w) in self.shape.y.iter().enumerate() {
            val[w] = Some(inst.constant(y >> i & 1 == 1));
        }
        for (w, v) in c.init.iter().enumerate() {
            if val[w].is_none() {
                if let Some(b) = v {
                    val[w] = Some(inst.constant(*b));
                }
            }
        }
        for g in &c.gates {
            val[g.out] = Some(inst.new_lit());
        }
        let mut value = |inst: &mut CnfInstance, w: usize| match val[w] {
            Some(l) => l,
            None => {
                let l = inst.false_lit();
                val[w] = Some(l);
                l
            }
        };
        let raw: Vec<Lit> = c
            .gates
            .iter()
            .map(|g| {
                let a = value(inst, g.a);
                let b = value(inst, g.b);
                match g.op {
                    Op::And => gate_and(inst, a, b),
                    Op::Or => gate_or(inst, a, b),
                    Op::Xor => gate_xor(inst, a, b),
                }
            })
            .collect();
        let eff: Vec<Lit> = c.gates.iter().map(|g| value(inst, g.out)).collect();
        let slot_out: Vec<Lit> = (0..k2).map(|_| inst.new_lit()).collect();
        for (i, slot) in self.slots.iter().enumerate() {
            let partner = slot_out[i ^ 1];
            for (g, &r) in raw.iter().enumerate() {
                let s = slot.is(g);
                inst.add_clause(&[!s, !slot_out[i], r]).expect("allocated");
                inst.add_clause(&[!s, slot_out[i], !r]).expect("allocated");
                inst.add_clause(&[!s, !eff[g], partner]).expect("allocated");
                inst.add_clause(&[!s, eff[g], !partner]).expect("allocated");
            }
        }
        for (g, (&e, &r)) in eff.iter().zip(&raw).enumerate() {
            let mut keep: Vec<Lit> = self.slots.iter().map(|s| s.is(g)).collect();
            keep.extend([!e, r]);
            inst.add_clause(&keep).expect("allocated");
            let n = keep.len();
            keep[n - 2] = e;
            keep[n - 1] = !r;
            inst.add_clause(&keep).expect("allocated");
        }
        let w = self.shape.x.len();
        let xb = BitVec::constant(inst, x, w).expect("fits");
        let yb = BitVec::constant(inst, y, w).expect("fits");
        let zb = BitVec::from_bits(self.shape.z.iter().map(|&w| value(inst, w)).collect())
            .expect("nonempty");
        bitvec::add(inst, &xb, &yb, &zb).expect("z is one bit wider");
        self.trainings += 1;
    }

    /// Excludes one slot assignment from future solutions.
    pub fn block(&mut self, gates: &[usize]) {
        let clause: Vec<Lit> = self
            .slots
            .iter()
            .zip(gates)
            .map(|(s, &g)| !s.is(g))
            .collect();
        self.instance.add_clause(&clause).expect("allocated");
    }

    /// Gate index per slot, or `None` when unsatisfiable.
    pub fn solve(&mut self) -> Option<Vec<usize>> {
        let model = self.instance.solve(&[]).into_model()?;
        Some(self.slots.iter().map(|s| s.value(&model)).collect())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SwapOptions {
    /// Initial training inputs; [`default_trainings`] when unset.
    pub trainings: Option<usize>,
    pub seed: u64,
    /// Random checks per candidate above 8 input bits.
    pub verify_samples: usize,
    pub max_rounds: usize,
}

impl Default for SwapOptions {
    fn default() -> Self {
        SwapOptions {
            trainings: None,
            seed: 1,
            verify_samples: 1000,
            max_rounds: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSolution {
    /// Swapped output wires, sorted.
    pub wires: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
    pub trainings: usize,
    pub rounds: usize,
}

/// Finds `pairs` output swaps that turn the circuit into a correct adder.
/// Candidates are verified by simulation; a failing input becomes a new
/// training, and a cyclic candidate is blocked.
pub fn find_swaps_sat(
    circuit: &Circuit,
    pairs: usize,
    opts: SwapOptions,
) -> Result<SwapSolution, WiresError> {
    let (mut enc, mut rng) = initial_encoding(circuit, pairs, opts)?;
    solve_swaps(&mut enc, &mut rng, opts)
}

/// The encoding with its initial random trainings, and the generator to
/// continue drawing verification inputs from.
pub fn initial_encoding(
    circuit: &Circuit,
    pairs: usize,
    opts: SwapOptions,
) -> Result<(SwapEncoding<'_>, ChaCha8Rng), WiresError> {
    let mut enc = SwapEncoding::new(circuit, pairs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let w = enc.shape.x.len();
    let mask = (1u64 << w) - 1;
    for _ in 0..opts
        .trainings
        .unwrap_or_else(|| default_trainings(w, pairs))
    {
        let (x, y) = (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask);
        enc.add_training(x, y);
    }
    Ok((enc, rng))
}

/// The refinement loop over an already-built encoding.
pub fn solve_swaps(
    enc: &mut SwapEncoding<'_>,
    rng: &mut ChaCha8Rng,
    opts: SwapOptions,
) -> Result<SwapSolution, WiresError> {
    let circuit = enc.circuit;
    for round in 1..=opts.max_rounds {
        let Some(gates) = enc.solve() else {
            return Err(WiresError::NoConsistentSwapSet);
        };
        let swaps: Vec<(usize, usize)> = gates.chunks(2).map(|p| (p[0], p[1])).collect();
        let repaired = circuit.with_swaps(&swaps);
        if repaired.topo_order().is_err() {
            log::debug!("round {round}: candidate {gates:?} is cyclic");
            enc.block(&gates);
            continue;
        }
        match check_adder(&repaired, rng, opts.verify_samples)? {
            Some((x, y)) => {
                log::debug!("round {round}: candidate {gates:?} fails on x={x} y={y}");
                enc.add_training(x, y);
            }
            None => {
                let mut wires: Vec<String> = gates
                    .iter()
                    .map(|&g| circuit.names[circuit.gates[g].out].clone())
                    .collect();
                wires.sort();
                return Ok(SwapSolution {
                    wires,
                    pairs: swaps,
                    trainings: enc.trainings,
                    rounds: round,
                });
            }
        }
    }
    Err(WiresError::RoundLimit(opts.max_rounds))
}

/// Output wires of gates that break the ripple-carry pattern, either by gate
/// kind or by which bit position they connect to. Sorted.
pub fn ripple_structural_check(c: &Circuit) -> Vec<String> {
    let w = c.input_width();
    let top = w;
    let consumers: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); c.names.len()];
        for (g, gate) in c.gates.iter().enumerate() {
            v[gate.a].push(g);
            if gate.b != gate.a {
                v[gate.b].push(g);
            }
        }
        v
    };
    let input_bit = |g: &Gate| -> Option<usize> {
        match (indexed(&c.names[g.a]), indexed(&c.names[g.b])) {
            (Some(('x', i)), Some(('y', j))) | (Some(('y', j)), Some(('x', i))) if i == j => {
                Some(i)
            }
            _ => None,
        }
    };
    let z_bit = |wire: usize| match indexed(&c.names[wire]) {
        Some(('z', i)) => Some(i),
        _ => None,
    };
    let drives = |wire: usize, op: Op| consumers[wire].iter().any(|&h| c.gates[h].op == op);
    let driven_by = |wire: usize, pred: &dyn Fn(&Gate) -> bool| {
        c.driver[wire].is_some_and(|h| pred(&c.gates[h]))
    };
    // Whether `wire` reaches z_{bit} directly or through the gate that produces it.
    let feeds_z = |wire: usize, bit: usize| {
        z_bit(wire) == Some(bit)
            || consumers[wire]
                .iter()
                .any(|&h| z_bit(c.gates[h].out) == Some(bit))
    };
    let half_sum = |bit: usize| move |g: &Gate| g.op == Op::Xor && input_bit(g) == Some(bit);
    // The bit of an OR, read off its input AND of x_i and y_i.
    let or_bit = |g: &Gate| {
        [g.a, g.b].iter().find_map(|&wire| {
            c.driver[wire].and_then(|h| input_bit(&c.gates[h]).filter(|_| c.gates[h].op == Op::And))
        })
    };

    let mut flagged = Vec::new();
    for g in &c.gates {
        let out = g.out;
        let ok = match (g.op, input_bit(g), z_bit(out)) {
            (_, _, Some(i)) if i == top => {
                if top == 1 {
                    g.op == Op::And && input_bit(g) == Some(0)
                } else {
                    g.op == Op::Or && or_bit(g) == Some(top - 1)
                }
            }
            (Op::Xor, Some(0), z) => z == Some(0),
            (Op::And, Some(0), None) => {
                top == 1 || (drives(out, Op::Xor) && drives(out, Op::And) && feeds_z(out, 1))
            }
            (Op::Xor, Some(i), None) => {
                drives(out, Op::Xor) && drives(out, Op::And) && feeds_z(out, i)
            }
            (Op::Xor, None, Some(i)) => {
                let ins = [g.a, g.b];
                i > 0 && ins.iter().any(|&wire| driven_by(wire, &half_sum(i)))
            }
            (Op::And, Some(i), None) => {
                consumers[out].len() == 1
                    && c.gates[consumers[out][0]].op == Op::Or
                    && feeds_z(c.gates[consumers[out][0]].out, i + 1)
            }
            (Op::And, None, None) => {
                let bit = [g.a, g.b].iter().find_map(|&wire| {
                    c.driver[wire]
                        .and_then(|h| input_bit(&c.gates[h]).filter(|_| c.gates[h].op == Op::Xor))
                });
                match bit {
                    Some(i) => {
                        consumers[out].len() == 1
                            && c.gates[consumers[out][0]].op == Op::Or
                            && feeds_z(c.gates[consumers[out][0]].out, i + 1)
                    }
                    None => false,
                }
            }
            (Op::Or, None, None) => {
                let from_ands = [g.a, g.b]
                    .iter()
                    .all(|&wire| driven_by(wire, &|h: &Gate| h.op == Op::And));
                from_ands
                    && drives(out, Op::Xor)
                    && drives(out, Op::And)
                    && or_bit(g).is_some_and(|i| feeds_z(out, i + 1))
            }
            _ => false,
        };
        if !ok {
            flagged.push(c.names[out].clone());
        }
        // Inputs of an OR must come from ANDs.
        if g.op == Op::Or {
            for wire in [g.a, g.b] {
                if c.driver[wire].is_some() && !driven_by(wire, &|h: &Gate| h.op == Op::And) {
                    flagged.push(c.names[wire].clone());
                }
            }
        }
    }
    flagged.sort();
    flagged.dedup();
    flagged
}
