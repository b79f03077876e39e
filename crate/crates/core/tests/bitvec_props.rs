mod common;

use aoc_core::bitvec::{
    add, add_fresh, eq, eq_const, minimize, shr_var, xor, xor_const, BitVec, BitVecError,
};
use aoc_core::encode::{gate_and, gate_or, gate_or_all, Infeasible};
use aoc_core::sat::CnfInstance;
use common::fix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The unique value of `out` once `ins` are fixed to `vals`.
fn eval(inst: &mut CnfInstance, ins: &[(&BitVec, u64)], out: &BitVec) -> u64 {
    let mut asg = Vec::new();
    for (v, val) in ins {
        asg.extend(fix(v.bits(), *val));
    }
    let m = inst
        .solve(&asg)
        .into_model()
        .expect("inputs fixed, outputs defined");
    let got = out.value(&m);
    // Uniqueness: excluding `got` must be UNSAT.
    let differs: Vec<_> = (0..out.width())
        .map(|i| {
            if got >> i & 1 == 1 {
                !out.bit(i)
            } else {
                out.bit(i)
            }
        })
        .collect();
    let mut probe = inst.clone();
    probe.add_clause(&differs).unwrap();
    assert!(
        !probe.solve(&asg).is_sat(),
        "output not functionally determined"
    );
    got
}

#[test]
fn shifter_exhaustive() {
    for w in 1..=6usize {
        for sw in 1..=3usize {
            let mut inst = CnfInstance::new();
            let x = BitVec::fresh(&mut inst, w).unwrap();
            let sh = BitVec::fresh(&mut inst, sw).unwrap();
            let out = shr_var(&mut inst, &x, &sh);
            assert_eq!(out.width(), w);
            for xv in 0..1u64 << w {
                for s in 0..1u64 << sw {
                    let want = xv.checked_shr(s as u32).unwrap_or(0);
                    assert_eq!(
                        eval(&mut inst, &[(&x, xv), (&sh, s)], &out),
                        want,
                        "w={w} {xv}>>{s}"
                    );
                }
            }
        }
    }
}

#[test]
fn xor_exhaustive() {
    for w in 1..=5usize {
        let mut inst = CnfInstance::new();
        let x = BitVec::fresh(&mut inst, w).unwrap();
        let y = BitVec::fresh(&mut inst, w).unwrap();
        let z = xor(&mut inst, &x, &y).unwrap();
        let consts: Vec<BitVec> = (0..1u64 << w)
            .map(|c| xor_const(&mut inst, &x, c).unwrap())
            .collect();
        for a in 0..1u64 << w {
            for b in 0..1u64 << w {
                assert_eq!(eval(&mut inst, &[(&x, a), (&y, b)], &z), a ^ b);
            }
            for (c, out) in consts.iter().enumerate() {
                assert_eq!(eval(&mut inst, &[(&x, a)], out), a ^ c as u64);
            }
        }
    }
}

#[test]
fn adder_exhaustive() {
    let w = 5;
    let mut inst = CnfInstance::new();
    let x = BitVec::fresh(&mut inst, w).unwrap();
    let y = BitVec::fresh(&mut inst, w).unwrap();
    let z = add_fresh(&mut inst, &x, &y).unwrap();
    assert_eq!(z.width(), w + 1);
    for a in 0..1u64 << w {
        for b in 0..1u64 << w {
            assert_eq!(eval(&mut inst, &[(&x, a), (&y, b)], &z), a + b);
        }
    }
}

#[test]
fn adder_relation_runs_backwards() {
    // Fixing z and x determines y.
    let w = 4;
    let mut inst = CnfInstance::new();
    let x = BitVec::fresh(&mut inst, w).unwrap();
    let y = BitVec::fresh(&mut inst, w).unwrap();
    let z = BitVec::fresh(&mut inst, w + 1).unwrap();
    add(&mut inst, &x, &y, &z).unwrap();
    for a in 0..1u64 << w {
        for s in 0..1u64 << (w + 1) {
            let mut asg = fix(x.bits(), a);
            asg.extend(fix(z.bits(), s));
            let feasible = s >= a && s - a < 1 << w;
            match inst.solve(&asg).into_model() {
                Some(m) => {
                    assert!(feasible, "{s} - {a}");
                    assert_eq!(y.value(&m), s - a);
                }
                None => assert!(!feasible, "{s} - {a}"),
            }
        }
    }
    let short = BitVec::fresh(&mut inst, w).unwrap();
    assert_eq!(
        add(&mut inst, &x, &y, &short),
        Err(BitVecError::SumWidth {
            expected: w + 1,
            got: w
        })
    );
}

#[test]
fn slicing_matches_arithmetic() {
    let w = 6;
    let mut inst = CnfInstance::new();
    let x = BitVec::fresh(&mut inst, w).unwrap();
    for v in 0..1u64 << w {
        for k in 1..=w {
            let low = x.take(k).unwrap();
            assert_eq!(eval(&mut inst, &[(&x, v)], &low), v % (1 << k));
        }
        for k in 0..w {
            let high = x.drop_low(k).unwrap();
            assert_eq!(eval(&mut inst, &[(&x, v)], &high), v >> k);
        }
        let wide = x.zero_extend(&mut inst, w + 3);
        assert_eq!(eval(&mut inst, &[(&x, v)], &wide), v);
    }
    assert!(x.take(0).is_err());
    assert!(x.take(w + 1).is_err());
    assert!(x.drop_low(w).is_err());
}

#[test]
fn equality_constraints() {
    let w = 4;
    for c in 0..1u64 << w {
        let mut inst = CnfInstance::new();
        let x = BitVec::fresh(&mut inst, w).unwrap();
        let y = BitVec::fresh(&mut inst, w).unwrap();
        eq_const(&mut inst, &x, c).unwrap();
        eq(&mut inst, &x, &y).unwrap();
        for v in 0..1u64 << w {
            assert_eq!(common::sat_under(&mut inst, &fix(x.bits(), v)), v == c);
            assert_eq!(common::sat_under(&mut inst, &fix(y.bits(), v)), v == c);
        }
    }
    let mut inst = CnfInstance::new();
    let x = BitVec::fresh(&mut inst, 3).unwrap();
    assert_eq!(
        eq_const(&mut inst, &x, 8),
        Err(BitVecError::Overflow { value: 8, width: 3 })
    );
}

#[test]
fn minimize_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..150 {
        let w = rng.gen_range(1..=6usize);
        let m = rng.gen_range(0..=w * 3);
        let clauses = common::random_cnf(&mut rng, w as u32, m, 3);
        let mut inst = CnfInstance::new();
        let x = BitVec::fresh(&mut inst, w).unwrap();
        for c in &clauses {
            inst.add_clause(&common::lits(c)).unwrap();
        }
        // Variable i+1 is bit i, so an assignment word is the value itself.
        let want = (0..1u64 << w).find(|&a| clauses.iter().all(|c| common::satisfies(a, c)));
        match (minimize(&mut inst, &x), want) {
            (Ok(min), Some(v)) => {
                assert_eq!(min.value, v);
                assert_eq!(x.value(&min.model), v);
                assert_eq!(min.transcript.len(), w);
                let bits: Vec<usize> = min.transcript.iter().map(|d| d.bit).collect();
                assert_eq!(bits, (0..w).rev().collect::<Vec<_>>());
                assert!(min
                    .transcript
                    .iter()
                    .all(|d| d.value == (v >> d.bit & 1 == 1)));
            }
            (Err(Infeasible), None) => {}
            (got, want) => panic!("minimize {got:?}, enumeration {want:?}"),
        }
    }
}

#[test]
fn minimum_of_a_sum() {
    // Smallest x with x + 11 = y and y >= 20 at width 6 is 9.
    let mut inst = CnfInstance::new();
    let x = BitVec::fresh(&mut inst, 6).unwrap();
    let eleven = BitVec::constant(&mut inst, 11, 6).unwrap();
    let y = add_fresh(&mut inst, &x, &eleven).unwrap();
    // y >= 20 = 0b10100
    let low = gate_or(&mut inst, y.bit(3), y.bit(2));
    let mid = gate_and(&mut inst, y.bit(4), low);
    let ge = gate_or_all(&mut inst, &[y.bit(6), y.bit(5), mid]);
    inst.add_clause(&[ge]).unwrap();
    assert_eq!(minimize(&mut inst, &x).unwrap().value, 9);
}

proptest! {
    #[test]
    fn constant_round_trip(w in 1usize..=64, raw in any::<u64>()) {
        let v = if w == 64 { raw } else { raw % (1 << w) };
        let mut inst = CnfInstance::new();
        let c = BitVec::constant(&mut inst, v, w).unwrap();
        let m = inst.solve(&[]).into_model().unwrap();
        prop_assert_eq!(c.value(&m), v);
    }

    #[test]
    fn wide_add_and_shift(a in 0u64..1 << 20, b in 0u64..1 << 20, s in 0u64..32) {
        let w = 20;
        let mut inst = CnfInstance::new();
        let x = BitVec::constant(&mut inst, a, w).unwrap();
        let y = BitVec::fresh(&mut inst, w).unwrap();
        eq_const(&mut inst, &y, b).unwrap();
        let sum = add_fresh(&mut inst, &x, &y).unwrap();
        let sh = BitVec::fresh(&mut inst, 5).unwrap();
        eq_const(&mut inst, &sh, s).unwrap();
        let shifted = shr_var(&mut inst, &y, &sh);
        let m = inst.solve(&[]).into_model().unwrap();
        prop_assert_eq!(sum.value(&m), a + b);
        prop_assert_eq!(shifted.value(&m), b >> s);
    }
}
