//! Exhaustive check of the 3(n-1) parity bound for two inputs.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::circuit::{truth_table, xor_chain, TruthTable};

// Truth tables of two-input functions as 4-bit masks, row r = x1 + 2*x2.
const X1: u8 = 0b1010;
const X2: u8 = 0b1100;
const XOR: u8 = 0b0110;
const AND: u8 = 0b1000;
const FULL: u8 = 0b1111;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchnorrReport {
    pub inputs: u32,
    pub max_gates: usize,
    pub circuits_enumerated: u64,
    pub functions_realized: usize,
    pub xor_realized: bool,
    pub and_realized: bool,
    pub upper_bound_gates: usize,
    pub upper_bound_correct: bool,
}

impl SchnorrReport {
    /// No small circuit computes parity, the enumeration is not vacuous, and
    /// the three-gate construction works.
    pub fn holds(&self) -> bool {
        !self.xor_realized && self.and_realized && self.upper_bound_correct && self.upper_bound_gates == 3
    }
}

fn enumerate(pool: &mut Vec<u8>, gates_left: usize, count: &mut u64, seen: &mut BTreeSet<u8>) {
    for &out in pool.iter() {
        for f in [out, !out & FULL] {
            *count += 1;
            seen.insert(f);
        }
    }
    if gates_left == 0 {
        return;
    }
    let m = pool.len();
    for a in 0..m {
        for b in 0..m {
            for (na, nb) in [(false, false), (false, true), (true, false), (true, true)] {
                let l = if na { !pool[a] & FULL } else { pool[a] };
                let r = if nb { !pool[b] & FULL } else { pool[b] };
                for g in [l & r, l | r] {
                    pool.push(g);
                    enumerate(pool, gates_left - 1, count, seen);
                    pool.pop();
                }
            }
        }
    }
}

/// Enumerate every DeMorgan circuit on two inputs with at most two binary
/// gates. Gate arguments range over the inputs, both constants and earlier
/// gates, each optionally negated; the output is any node, optionally
/// negated. Circuits are counted with repetition.
pub fn schnorr_exhaustive_check() -> SchnorrReport {
    let max_gates = 2;
    let mut pool = vec![X1, X2, 0, FULL];
    let mut count = 0;
    let mut seen = BTreeSet::new();
    enumerate(&mut pool, max_gates, &mut count, &mut seen);

    let upper = xor_chain(2);
    SchnorrReport {
        inputs: 2,
        max_gates,
        circuits_enumerated: count,
        functions_realized: seen.len(),
        xor_realized: seen.contains(&XOR),
        and_realized: seen.contains(&AND),
        upper_bound_gates: upper.size(),
        upper_bound_correct: truth_table(&upper).is_ok_and(|t| t == TruthTable::parity(2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_match_the_row_convention() {
        let x1 = TruthTable::from_fn(2, |a| a.get(1));
        let bits = |t: &TruthTable| t.rows.iter().enumerate().map(|(r, b)| u8::from(*b) << r).sum::<u8>();
        assert_eq!(bits(&x1), X1);
        assert_eq!(bits(&TruthTable::from_fn(2, |a| a.get(2))), X2);
        assert_eq!(bits(&TruthTable::parity(2)), XOR);
    }

    #[test]
    fn two_gates_do_not_suffice() {
        let r = schnorr_exhaustive_check();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.functions_realized, 14);
    }
}
