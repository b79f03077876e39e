//! Compilation of boolean gates, cardinality bounds, one-hot finite-domain
//! variables and a maximize-true-count objective into CNF.
//!
//! Gate builders fold constants: when an input is the instance's constant
//! literal (see [`CnfInstance::true_lit`]) no variable is allocated.

use thiserror::Error;

use crate::sat::{CnfInstance, Lit, Model, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("bound {k} out of range for {n} literals")]
    BoundOutOfRange { k: usize, n: usize },
    #[error("finite-domain variable needs a nonempty domain")]
    EmptyDomain,
    #[error("domain sizes differ ({0} vs {1})")]
    DomainMismatch(usize, usize),
}

/// Returned by the optimizers when the base instance has no model at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("instance is infeasible")]
pub struct Infeasible;

fn clause(inst: &mut CnfInstance, lits: &[Lit]) {
    inst.add_clause(lits)
        .expect("encoder literals are always allocated");
}

pub fn gate_not(a: Lit) -> Lit {
    !a
}

/// Fresh `c` with `c <-> a & b`.
pub fn gate_and(inst: &mut CnfInstance, a: Lit, b: Lit) -> Lit {
    match (inst.const_value(a), inst.const_value(b)) {
        (Some(false), _) | (_, Some(false)) => return inst.false_lit(),
        (Some(true), _) => return b,
        (_, Some(true)) => return a,
        _ => {}
    }
    if a == b {
        return a;
    }
    if a == !b {
        return inst.false_lit();
    }
    let c = inst.new_lit();
    clause(inst, &[!c, a]);
    clause(inst, &[!c, b]);
    clause(inst, &[c, !a, !b]);
    c
}

pub fn gate_or(inst: &mut CnfInstance, a: Lit, b: Lit) -> Lit {
    !gate_and(inst, !a, !b)
}

/// Fresh `c` with `c <-> a ^ b`.
pub fn gate_xor(inst: &mut CnfInstance, a: Lit, b: Lit) -> Lit {
    match (inst.const_value(a), inst.const_value(b)) {
        (Some(x), Some(y)) => return inst.constant(x ^ y),
        (Some(x), None) => return if x { !b } else { b },
        (None, Some(y)) => return if y { !a } else { a },
        _ => {}
    }
    if a == b {
        return inst.false_lit();
    }
    if a == !b {
        return inst.true_lit();
    }
    let c = inst.new_lit();
    clause(inst, &[!c, a, b]);
    clause(inst, &[!c, !a, !b]);
    clause(inst, &[c, !a, b]);
    clause(inst, &[c, a, !b]);
    c
}

/// `c <-> (a <-> b)`.
pub fn gate_eq(inst: &mut CnfInstance, a: Lit, b: Lit) -> Lit {
    !gate_xor(inst, a, b)
}

/// `c <-> (sel ? then : otherwise)`.
pub fn gate_mux(inst: &mut CnfInstance, sel: Lit, then: Lit, otherwise: Lit) -> Lit {
    match inst.const_value(sel) {
        Some(true) => return then,
        Some(false) => return otherwise,
        None => {}
    }
    if then == otherwise {
        return then;
    }
    match (inst.const_value(then), inst.const_value(otherwise)) {
        (Some(false), _) => return gate_and(inst, !sel, otherwise),
        (Some(true), _) => return gate_or(inst, sel, otherwise),
        (_, Some(false)) => return gate_and(inst, sel, then),
        (_, Some(true)) => return gate_or(inst, !sel, then),
        _ => {}
    }
    let c = inst.new_lit();
    clause(inst, &[!sel, !then, c]);
    clause(inst, &[!sel, then, !c]);
    clause(inst, &[sel, !otherwise, c]);
    clause(inst, &[sel, otherwise, !c]);
    // redundant, but they help propagation when both branches agree
    clause(inst, &[!then, !otherwise, c]);
    clause(inst, &[then, otherwise, !c]);
    c
}

/// `c <-> (l1 & l2 & ...)`; the empty conjunction is true.
pub fn gate_and_all(inst: &mut CnfInstance, lits: &[Lit]) -> Lit {
    let mut inputs = Vec::with_capacity(lits.len());
    for &l in lits {
        match inst.const_value(l) {
            Some(true) => {}
            Some(false) => return inst.false_lit(),
            None => inputs.push(l),
        }
    }
    inputs.sort_unstable();
    inputs.dedup();
    if inputs.windows(2).any(|w| w[0] == !w[1]) {
        return inst.false_lit();
    }
    match inputs.len() {
        0 => return inst.true_lit(),
        1 => return inputs[0],
        _ => {}
    }
    let c = inst.new_lit();
    let mut long = vec![c];
    for &l in &inputs {
        clause(inst, &[!c, l]);
        long.push(!l);
    }
    clause(inst, &long);
    c
}

pub fn gate_or_all(inst: &mut CnfInstance, lits: &[Lit]) -> Lit {
    let negated: Vec<Lit> = lits.iter().map(|&l| !l).collect();
    !gate_and_all(inst, &negated)
}

/// Full adder; returns `(sum, carry_out)`.
pub fn full_adder(inst: &mut CnfInstance, a: Lit, b: Lit, carry_in: Lit) -> (Lit, Lit) {
    let half = gate_xor(inst, a, b);
    let sum = gate_xor(inst, half, carry_in);
    let both = gate_and(inst, a, b);
    let through = gate_and(inst, half, carry_in);
    let carry = gate_or(inst, both, through);
    (sum, carry)
}

/// At most `k` of `lits` are true (sequential counter).
pub fn at_most_k(inst: &mut CnfInstance, lits: &[Lit], k: usize) -> Result<(), EncodeError> {
    let n = lits.len();
    if k > n {
        return Err(EncodeError::BoundOutOfRange { k, n });
    }
    if k == n {
        return Ok(());
    }
    if k == 0 {
        for &l in lits {
            clause(inst, &[!l]);
        }
        return Ok(());
    }
    // s[i][j]: at least j+1 of lits[0..=i] are true (one direction only).
    let mut prev: Vec<Lit> = Vec::with_capacity(k);
    for (i, &x) in lits.iter().enumerate() {
        if i + 1 == n {
            clause(inst, &[!x, !prev[k - 1]]);
            break;
        }
        let cur: Vec<Lit> = (0..k).map(|_| inst.new_lit()).collect();
        clause(inst, &[!x, cur[0]]);
        if i == 0 {
            for &s in &cur[1..] {
                clause(inst, &[!s]);
            }
        } else {
            for j in 0..k {
                clause(inst, &[!prev[j], cur[j]]);
                if j > 0 {
                    clause(inst, &[!x, !prev[j - 1], cur[j]]);
                }
            }
            clause(inst, &[!x, !prev[k - 1]]);
        }
        prev = cur;
    }
    Ok(())
}

/// At least `k` of `lits` are true.
pub fn at_least_k(inst: &mut CnfInstance, lits: &[Lit], k: usize) -> Result<(), EncodeError> {
    let n = lits.len();
    if k > n {
        return Err(EncodeError::BoundOutOfRange { k, n });
    }
    let negated: Vec<Lit> = lits.iter().map(|&l| !l).collect();
    at_most_k(inst, &negated, n - k)
}

/// An exact unary counter over a literal sequence: `at_least(j)` is true in a
/// model iff at least `j` inputs are true.
#[derive(Debug, Clone)]
pub struct CardinalityContext {
    inputs: Vec<Lit>,
    // top[j - 1] <-> (count >= j)
    top: Vec<Lit>,
}

impl CardinalityContext {
    pub fn new(inst: &mut CnfInstance, inputs: &[Lit]) -> Self {
        let mut row: Vec<Lit> = Vec::new();
        for &x in inputs {
            let mut next = Vec::with_capacity(row.len() + 1);
            for j in 0..=row.len() {
                let with_x = if j == 0 {
                    x
                } else {
                    gate_and(inst, x, row[j - 1])
                };
                let lit = match row.get(j) {
                    Some(&s) => gate_or(inst, s, with_x),
                    None => with_x,
                };
                next.push(lit);
            }
            row = next;
        }
        CardinalityContext {
            inputs: inputs.to_vec(),
            top: row,
        }
    }

    pub fn inputs(&self) -> &[Lit] {
        &self.inputs
    }

    /// Literal equivalent to "at least `j` inputs are true".
    pub fn at_least(&self, inst: &mut CnfInstance, j: usize) -> Lit {
        if j == 0 {
            inst.true_lit()
        } else if j > self.inputs.len() {
            inst.false_lit()
        } else {
            self.top[j - 1]
        }
    }

    /// Literal equivalent to "at most `j` inputs are true".
    pub fn at_most(&self, inst: &mut CnfInstance, j: usize) -> Lit {
        !self.at_least(inst, j + 1)
    }

    pub fn count(&self, model: &Model) -> usize {
        self.inputs.iter().filter(|&&l| model.value(l)).count()
    }
}

/// A one-hot finite-domain variable over values `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdVar {
    selectors: Vec<Lit>,
}

impl FdVar {
    pub fn domain_size(&self) -> usize {
        self.selectors.len()
    }

    pub fn selectors(&self) -> &[Lit] {
        &self.selectors
    }

    /// The literal for `self == value`.
    pub fn is(&self, value: usize) -> Lit {
        self.selectors[value]
    }

    pub fn value(&self, model: &Model) -> usize {
        self.selectors
            .iter()
            .position(|&s| model.value(s))
            .expect("exactly-one clauses guarantee a selected value")
    }
}

pub fn fd_var(inst: &mut CnfInstance, n: usize) -> Result<FdVar, EncodeError> {
    if n == 0 {
        return Err(EncodeError::EmptyDomain);
    }
    let selectors: Vec<Lit> = (0..n).map(|_| inst.new_lit()).collect();
    clause(inst, &selectors);
    for i in 0..n {
        for j in i + 1..n {
            clause(inst, &[!selectors[i], !selectors[j]]);
        }
    }
    Ok(FdVar { selectors })
}

/// Pairwise distinct values. More variables than values yields an unsatisfiable instance.
pub fn all_different(inst: &mut CnfInstance, vars: &[FdVar]) -> Result<(), EncodeError> {
    let Some(first) = vars.first() else {
        return Ok(());
    };
    let n = first.domain_size();
    if let Some(v) = vars.iter().find(|v| v.domain_size() != n) {
        return Err(EncodeError::DomainMismatch(n, v.domain_size()));
    }
    if vars.len() > n {
        clause(inst, &[]);
        return Ok(());
    }
    for value in 0..n {
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                clause(inst, &[!vars[i].is(value), !vars[j].is(value)]);
            }
        }
    }
    Ok(())
}

/// `a < b` as values, via an order ladder over `b`'s selectors.
pub fn fd_less(inst: &mut CnfInstance, a: &FdVar, b: &FdVar) -> Result<(), EncodeError> {
    let n = a.domain_size();
    if b.domain_size() != n {
        return Err(EncodeError::DomainMismatch(n, b.domain_size()));
    }
    // above[v] <-> b > v
    let mut above = vec![inst.false_lit(); n];
    for v in (0..n.saturating_sub(1)).rev() {
        above[v] = gate_or(inst, b.is(v + 1), above[v + 1]);
    }
    for (v, &rest) in above.iter().enumerate() {
        clause(inst, &[!a.is(v), rest]);
    }
    Ok(())
}

/// An optimum found by [`maximize_true_count`].
#[derive(Debug, Clone)]
pub struct Optimum {
    pub value: usize,
    pub model: Model,
}

/// Maximizes the number of true literals among `lits` by iterative
/// strengthening: solve, then demand one more true literal, until UNSAT.
/// Bounds are passed as assumptions, so the instance stays reusable.
pub fn maximize_true_count(inst: &mut CnfInstance, lits: &[Lit]) -> Result<Optimum, Infeasible> {
    let counter = CardinalityContext::new(inst, lits);
    let mut model = inst.solve(&[]).into_model().ok_or(Infeasible)?;
    loop {
        let k = counter.count(&model);
        if k == lits.len() {
            return Ok(Optimum { value: k, model });
        }
        let bound = counter.at_least(inst, k + 1);
        match inst.solve(&[bound]) {
            SolveResult::Sat(better) => {
                log::debug!("objective improved to at least {}", k + 1);
                model = better;
            }
            SolveResult::Unsat => return Ok(Optimum { value: k, model }),
        }
    }
}
