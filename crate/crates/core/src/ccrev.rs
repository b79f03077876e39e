//! The 3-bit device: interpreter and reverse search for the least initial A
//! that makes the program print a given sequence (by default itself).

use thiserror::Error;

use crate::bitvec::{self, BitVec};
use crate::sat::{CnfInstance, Lit};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Longest target the reverse solvers accept: 3 bits per output in 64 bits.
pub const MAX_TARGET_LEN: usize = 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("combo operand 7 at ip {0}")]
    InvalidCombo(usize),
    #[error("jump to odd address {target} at ip {ip}")]
    OddJump { ip: usize, target: u8 },
    #[error("step budget of {0} exhausted")]
    StepLimit(u64),
    #[error("instruction at ip {0} has no operand")]
    MissingOperand(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReverseError {
    #[error("unsupported program shape: {0}")]
    UnsupportedShape(String),
    #[error("no initial value of A produces the target")]
    Infeasible,
    #[error("target must have between 1 and {MAX_TARGET_LEN} codes, got {0}")]
    TargetLength(usize),
    #[error("target code {0} is not a 3-bit value")]
    TargetCode(u8),
    #[error("bit width must be between 3 and 64, got {0}")]
    Width(usize),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("solver answer {0} fails verification")]
    Unverified(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Device {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub program: Vec<u8>,
}

pub fn parse_device(text: &str) -> Result<Device, ParseError> {
    let mut regs: [Option<u64>; 3] = [None; 3];
    let mut program = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let err = |msg: String| ParseError::Line { line, msg };
        let (key, value) = trimmed
            .split_once(':')
            .ok_or_else(|| err(format!("expected `key: value`, got `{trimmed}`")))?;
        let key = key.trim();
        let value = value.trim();
        let slot = match key {
            "Register A" => Some(0),
            "Register B" => Some(1),
            "Register C" => Some(2),
            "Program" => None,
            _ => return Err(err(format!("unknown field `{key}`"))),
        };
        match slot {
            Some(i) => {
                let v = value
                    .parse()
                    .map_err(|_| err(format!("bad register value `{value}`")))?;
                regs[i] = Some(v);
            }
            None => {
                let codes = value
                    .split(',')
                    .map(|t| {
                        let t = t.trim();
                        match t.parse::<u8>() {
                            Ok(c) if c < 8 => Ok(c),
                            _ => Err(err(format!("bad program code `{t}`"))),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                program = Some(codes);
            }
        }
    }
    Ok(Device {
        a: regs[0].ok_or(ParseError::Missing("Register A"))?,
        b: regs[1].ok_or(ParseError::Missing("Register B"))?,
        c: regs[2].ok_or(ParseError::Missing("Register C"))?,
        program: program.ok_or(ParseError::Missing("Program"))?,
    })
}

fn shr(x: u64, k: u64) -> u64 {
    if k >= 64 {
        0
    } else {
        x >> k
    }
}

pub fn run(program: &[u8], a: u64, b: u64, c: u64) -> Result<Vec<u8>, ExecError> {
    run_with_budget(program, a, b, c, DEFAULT_STEP_BUDGET)
}

pub fn run_with_budget(
    program: &[u8],
    mut a: u64,
    mut b: u64,
    mut c: u64,
    budget: u64,
) -> Result<Vec<u8>, ExecError> {
    let mut ip = 0usize;
    let mut out = Vec::new();
    let mut steps = 0u64;
    while ip < program.len() {
        if steps == budget {
            return Err(ExecError::StepLimit(budget));
        }
        steps += 1;
        let op = program[ip];
        let operand = *program.get(ip + 1).ok_or(ExecError::MissingOperand(ip))?;
        let combo = || match operand {
            0..=3 => Ok(u64::from(operand)),
            4 => Ok(a),
            5 => Ok(b),
            6 => Ok(c),
            _ => Err(ExecError::InvalidCombo(ip)),
        };
        match op {
            0 => a = shr(a, combo()?),
            1 => b ^= u64::from(operand),
            2 => b = combo()? % 8,
            3 => {
                if a != 0 {
                    if operand % 2 == 1 {
                        return Err(ExecError::OddJump {
                            ip,
                            target: operand,
                        });
                    }
                    ip = usize::from(operand);
                    continue;
                }
            }
            4 => b ^= c,
            5 => out.push((combo()? % 8) as u8),
            6 => b = shr(a, combo()?),
            _ => c = shr(a, combo()?),
        }
        ip += 2;
    }
    Ok(out)
}

/// The loop body (everything but the trailing `jnz 0`), after checking that
/// the program is a single loop that prints once and drops three bits of A.
fn loop_body(program: &[u8]) -> Result<&[u8], ReverseError> {
    let shape = |m: &str| Err(ReverseError::UnsupportedShape(m.to_string()));
    if program.len() < 2 || program.len() % 2 == 1 {
        return shape("program must be a nonempty list of instruction pairs");
    }
    let n = program.len();
    if program[n - 2..] != [3, 0] {
        return shape("program must end with `jnz 0`");
    }
    let body = &program[..n - 2];
    let pairs: Vec<(u8, u8)> = body.chunks(2).map(|p| (p[0], p[1])).collect();
    if pairs.iter().any(|&(op, _)| op == 3) {
        return shape("only the trailing jump is allowed");
    }
    if pairs.iter().filter(|&&(op, _)| op == 5).count() != 1 {
        return shape("loop must print exactly once");
    }
    let advs: Vec<u8> = pairs
        .iter()
        .filter(|&&(op, _)| op == 0)
        .map(|&(_, x)| x)
        .collect();
    if advs != [3] {
        return shape("loop must shift A by exactly 3 once");
    }
    if pairs
        .iter()
        .any(|&(op, x)| x == 7 && matches!(op, 0 | 2 | 5 | 6 | 7))
    {
        return shape("combo operand 7");
    }
    Ok(body)
}

fn check_target(target: &[u8]) -> Result<(), ReverseError> {
    if target.is_empty() || target.len() > MAX_TARGET_LEN {
        return Err(ReverseError::TargetLength(target.len()));
    }
    if let Some(&c) = target.iter().find(|&&c| c > 7) {
        return Err(ReverseError::TargetCode(c));
    }
    Ok(())
}

/// Least A building the value from its top 3-bit digit down. A candidate for
/// the last `k` codes must make the program print exactly those codes.
pub fn reverse_min_a_dfs(program: &[u8], target: Option<&[u8]>) -> Result<u64, ReverseError> {
    loop_body(program)?;
    let target = target.unwrap_or(program);
    check_target(target)?;

    fn dfs(program: &[u8], target: &[u8], k: usize, prefix: u64) -> Result<Option<u64>, ExecError> {
        if k == 0 {
            return Ok(Some(prefix));
        }
        let suffix = &target[k - 1..];
        for digit in 0..8 {
            let a = prefix << 3 | digit;
            if run(program, a, 0, 0)? == suffix {
                if let Some(found) = dfs(program, target, k - 1, a)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    let a = dfs(program, target, target.len(), 0)?.ok_or(ReverseError::Infeasible)?;
    if run(program, a, 0, 0)? != target {
        return Err(ReverseError::Unverified(a));
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SatOptions {
    /// Width of the A register; defaults to three bits per target code.
    pub width: Option<usize>,
}

/// A CNF encoding of "starting from A (and B = C = 0), the program prints the target".
pub struct ReverseEncoding {
    pub instance: CnfInstance,
    pub a: BitVec,
}

fn shr_const(inst: &mut CnfInstance, x: &BitVec, k: usize) -> BitVec {
    let w = x.width();
    if k >= w {
        return BitVec::constant(inst, 0, w).expect("zero fits");
    }
    x.drop_low(k).expect("k < width").zero_extend(inst, w)
}

pub fn encode_reverse(
    program: &[u8],
    target: Option<&[u8]>,
    opts: SatOptions,
) -> Result<ReverseEncoding, ReverseError> {
    let body = loop_body(program)?;
    let target = target.unwrap_or(program);
    check_target(target)?;
    let w = opts.width.unwrap_or(3 * target.len());
    if !(3..=64).contains(&w) {
        return Err(ReverseError::Width(w));
    }

    let mut inst = CnfInstance::new();
    let a0 = BitVec::fresh(&mut inst, w).expect("nonzero width");
    let mut a = a0.clone();
    let mut b = BitVec::constant(&mut inst, 0, w).expect("zero fits");
    let mut c = b.clone();
    let small =
        |inst: &mut CnfInstance, v: u8| BitVec::constant(inst, u64::from(v), w).expect("w >= 3");
    for (i, &code) in target.iter().enumerate() {
        for pair in body.chunks(2) {
            let (op, x) = (pair[0], pair[1]);
            let combo = |inst: &mut CnfInstance, a: &BitVec, b: &BitVec, c: &BitVec| match x {
                4 => a.clone(),
                5 => b.clone(),
                6 => c.clone(),
                _ => small(inst, x),
            };
            match op {
                0 | 6 | 7 => {
                    let shifted = if x <= 3 {
                        shr_const(&mut inst, &a, usize::from(x))
                    } else {
                        let amount = combo(&mut inst, &a, &b, &c);
                        bitvec::shr_var(&mut inst, &a, &amount)
                    };
                    match op {
                        0 => a = shifted,
                        6 => b = shifted,
                        _ => c = shifted,
                    }
                }
                1 => b = bitvec::xor_const(&mut inst, &b, u64::from(x)).expect("fits"),
                2 => {
                    let v = combo(&mut inst, &a, &b, &c);
                    b = v.take(3).expect("nonzero").zero_extend(&mut inst, w);
                }
                4 => b = bitvec::xor(&mut inst, &b, &c).expect("same width"),
                5 => {
                    let v = combo(&mut inst, &a, &b, &c);
                    let low = v.take(3).expect("nonzero");
                    if bitvec::eq_const(&mut inst, &low, u64::from(code)).is_err() {
                        inst.add_clause(&[]).expect("empty clause");
                    }
                }
                _ => unreachable!("shape check excludes jumps in the body"),
            }
        }
        if i + 1 < target.len() {
            // The loop must go round again.
            inst.add_clause(a.bits()).expect("bits are allocated");
        } else {
            let halted: Vec<Lit> = a.bits().iter().map(|&l| !l).collect();
            for l in halted {
                inst.add_clause(&[l]).expect("bits are allocated");
            }
        }
    }
    Ok(ReverseEncoding {
        instance: inst,
        a: a0,
    })
}

/// Least A via bit-vector constraints and MSB-first minimization.
pub fn reverse_min_a_sat(
    program: &[u8],
    target: Option<&[u8]>,
    opts: SatOptions,
) -> Result<u64, ReverseError> {
    let mut enc = encode_reverse(program, target, opts)?;
    solve_encoding(program, target, &mut enc)
}

/// Minimizes an already-built encoding and verifies the answer by running it.
pub fn solve_encoding(
    program: &[u8],
    target: Option<&[u8]>,
    enc: &mut ReverseEncoding,
) -> Result<u64, ReverseError> {
    let target = target.unwrap_or(program);
    let min = bitvec::minimize(&mut enc.instance, &enc.a).map_err(|_| ReverseError::Infeasible)?;
    log::debug!(
        "minimized A over {} vars, {} clauses",
        enc.instance.num_vars(),
        enc.instance.num_clauses()
    );
    if run(program, min.value, 0, 0)? != target {
        return Err(ReverseError::Unverified(min.value));
    }
    Ok(min.value)
}
