//! Unsigned bit-vector constraints compiled to CNF.
//!
//! A [`BitVec`] is a sequence of literals, least significant bit first.
//! Slicing shares literals and adds no clauses; arithmetic allocates gates
//! through [`crate::encode`].

use thiserror::Error;

use crate::encode::{full_adder, gate_mux, gate_xor, Infeasible};
use crate::sat::{CnfInstance, Lit, Model, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitVecError {
    #[error("bit-vector width must be at least 1")]
    ZeroWidth,
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },
    #[error("slice bound {k} out of range for width {width}")]
    SliceOutOfRange { k: usize, width: usize },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("sum width must be {expected}, got {got}")]
    SumWidth { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    bits: Vec<Lit>,
}

fn fits(value: u64, width: usize) -> bool {
    width >= 64 || value >> width == 0
}

impl BitVec {
    /// Fresh, unconstrained vector.
    pub fn fresh(inst: &mut CnfInstance, width: usize) -> Result<BitVec, BitVecError> {
        if width == 0 {
            return Err(BitVecError::ZeroWidth);
        }
        Ok(BitVec {
            bits: (0..width).map(|_| inst.new_lit()).collect(),
        })
    }

    /// Vector of fixed literals holding `value`.
    pub fn constant(
        inst: &mut CnfInstance,
        value: u64,
        width: usize,
    ) -> Result<BitVec, BitVecError> {
        if width == 0 {
            return Err(BitVecError::ZeroWidth);
        }
        if !fits(value, width) {
            return Err(BitVecError::Overflow { value, width });
        }
        Ok(BitVec {
            bits: (0..width)
                .map(|i| inst.constant(i < 64 && (value >> i) & 1 == 1))
                .collect(),
        })
    }

    pub fn from_bits(bits: Vec<Lit>) -> Result<BitVec, BitVecError> {
        if bits.is_empty() {
            return Err(BitVecError::ZeroWidth);
        }
        Ok(BitVec { bits })
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[Lit] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> Lit {
        self.bits[i]
    }

    /// Low `k` bits (`value mod 2^k`).
    pub fn take(&self, k: usize) -> Result<BitVec, BitVecError> {
        if k == 0 || k > self.width() {
            return Err(BitVecError::SliceOutOfRange {
                k,
                width: self.width(),
            });
        }
        Ok(BitVec {
            bits: self.bits[..k].to_vec(),
        })
    }

    /// High `width - k` bits (`value div 2^k`).
    pub fn drop_low(&self, k: usize) -> Result<BitVec, BitVecError> {
        if k >= self.width() {
            return Err(BitVecError::SliceOutOfRange {
                k,
                width: self.width(),
            });
        }
        Ok(BitVec {
            bits: self.bits[k..].to_vec(),
        })
    }

    /// Pads with constant-false bits up to `width`; never truncates.
    pub fn zero_extend(&self, inst: &mut CnfInstance, width: usize) -> BitVec {
        let mut bits = self.bits.clone();
        while bits.len() < width {
            bits.push(inst.false_lit());
        }
        BitVec { bits }
    }

    /// Value under `model`; bits beyond 64 must be false.
    pub fn value(&self, model: &Model) -> u64 {
        self.bits.iter().enumerate().fold(0u64, |acc, (i, &b)| {
            if model.value(b) {
                assert!(i < 64, "bit-vector value exceeds 64 bits");
                acc | 1 << i
            } else {
                acc
            }
        })
    }
}

/// Fresh `z` with `z_i <-> x_i ^ y_i`.
pub fn xor(inst: &mut CnfInstance, x: &BitVec, y: &BitVec) -> Result<BitVec, BitVecError> {
    if x.width() != y.width() {
        return Err(BitVecError::WidthMismatch(x.width(), y.width()));
    }
    Ok(BitVec {
        bits: x
            .bits
            .iter()
            .zip(&y.bits)
            .map(|(&a, &b)| gate_xor(inst, a, b))
            .collect(),
    })
}

/// `x ^ value`, the constant zero-extended to `x`'s width.
pub fn xor_const(inst: &mut CnfInstance, x: &BitVec, value: u64) -> Result<BitVec, BitVecError> {
    let c = BitVec::constant(inst, value, x.width())?;
    xor(inst, x, &c)
}

/// `x >> value(sh)` shifting in zeros, as a barrel shifter with one
/// multiplexer stage per bit of `sh`. Stages whose shift reaches past the
/// width clear the result outright.
pub fn shr_var(inst: &mut CnfInstance, x: &BitVec, sh: &BitVec) -> BitVec {
    let width = x.width();
    let zero = inst.false_lit();
    let mut cur = x.bits.clone();
    for (stage, &s) in sh.bits.iter().enumerate() {
        let amount = 1usize.checked_shl(stage as u32).unwrap_or(usize::MAX);
        cur = (0..width)
            .map(|i| {
                let shifted = i
                    .checked_add(amount)
                    .filter(|&j| j < width)
                    .map_or(zero, |j| cur[j]);
                gate_mux(inst, s, shifted, cur[i])
            })
            .collect();
    }
    BitVec { bits: cur }
}

pub fn eq_const(inst: &mut CnfInstance, x: &BitVec, value: u64) -> Result<(), BitVecError> {
    if !fits(value, x.width()) {
        return Err(BitVecError::Overflow {
            value,
            width: x.width(),
        });
    }
    for (i, &b) in x.bits.iter().enumerate() {
        let bit = i < 64 && (value >> i) & 1 == 1;
        inst.add_clause(&[if bit { b } else { !b }])
            .expect("bits are allocated");
    }
    Ok(())
}

pub fn eq(inst: &mut CnfInstance, x: &BitVec, y: &BitVec) -> Result<(), BitVecError> {
    if x.width() != y.width() {
        return Err(BitVecError::WidthMismatch(x.width(), y.width()));
    }
    for (&a, &b) in x.bits.iter().zip(&y.bits) {
        inst.add_clause(&[!a, b]).expect("bits are allocated");
        inst.add_clause(&[a, !b]).expect("bits are allocated");
    }
    Ok(())
}

/// `z = x + y` with a ripple-carry chain; `z` carries one extra bit for the carry-out.
pub fn add(inst: &mut CnfInstance, x: &BitVec, y: &BitVec, z: &BitVec) -> Result<(), BitVecError> {
    if x.width() != y.width() {
        return Err(BitVecError::WidthMismatch(x.width(), y.width()));
    }
    if z.width() != x.width() + 1 {
        return Err(BitVecError::SumWidth {
            expected: x.width() + 1,
            got: z.width(),
        });
    }
    let sum = add_fresh(inst, x, y)?;
    eq(inst, &sum, z)
}

/// Returns a `w + 1` bit vector equal to `x + y`.
pub fn add_fresh(inst: &mut CnfInstance, x: &BitVec, y: &BitVec) -> Result<BitVec, BitVecError> {
    if x.width() != y.width() {
        return Err(BitVecError::WidthMismatch(x.width(), y.width()));
    }
    let mut carry = inst.false_lit();
    let mut bits = Vec::with_capacity(x.width() + 1);
    for (&a, &b) in x.bits.iter().zip(&y.bits) {
        let (s, c) = full_adder(inst, a, b, carry);
        bits.push(s);
        carry = c;
    }
    bits.push(carry);
    Ok(BitVec { bits })
}

/// One step of the MSB-first minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitDecision {
    pub bit: usize,
    pub value: bool,
    /// Whether a solver call decided this bit; otherwise the current model already had it clear.
    pub probed: bool,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub value: u64,
    pub model: Model,
    pub transcript: Vec<BitDecision>,
}

/// Numeric minimum of `x` over all models, found by fixing bits from the most
/// significant down: a bit stays 0 if that is still satisfiable, else it is 1.
pub fn minimize(inst: &mut CnfInstance, x: &BitVec) -> Result<Minimum, Infeasible> {
    let mut model = inst.solve(&[]).into_model().ok_or(Infeasible)?;
    let mut fixed: Vec<Lit> = Vec::with_capacity(x.width());
    let mut transcript = Vec::with_capacity(x.width());
    for i in (0..x.width()).rev() {
        let b = x.bit(i);
        if !model.value(b) {
            fixed.push(!b);
            transcript.push(BitDecision {
                bit: i,
                value: false,
                probed: false,
            });
            continue;
        }
        fixed.push(!b);
        match inst.solve(&fixed) {
            SolveResult::Sat(m) => {
                model = m;
                transcript.push(BitDecision {
                    bit: i,
                    value: false,
                    probed: true,
                });
            }
            SolveResult::Unsat => {
                *fixed.last_mut().unwrap() = b;
                transcript.push(BitDecision {
                    bit: i,
                    value: true,
                    probed: true,
                });
            }
        }
    }
    Ok(Minimum {
        value: x.value(&model),
        model,
        transcript,
    })
}
