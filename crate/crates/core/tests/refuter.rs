mod common;

use common::{random_circuit, GenConfig};
use gatelim::circuit::{evaluate, truth_table, xor_block, xor_chain, Circuit, CircuitBuilder, TruthTable};
use gatelim::refuter::{refute, schnorr_exhaustive_check, search_bad_restriction, Branch, OutcomeTag, RefuteError};
use gatelim::rewrite::{normalize_circuit, substitute_input, Strategy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn undersized(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=8u32);
    let gates = rng.gen_range(0..3 * (n as usize - 1));
    random_circuit(&mut rng, GenConfig { inputs: n, gates, constant_rate: 0.05 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn refutations_are_sound(seed in any::<u64>()) {
        let c = undersized(seed);
        let r = refute(&c).unwrap();
        let cx = &r.counterexample;
        prop_assert_eq!(evaluate(&c, &cx.input).unwrap(), cx.claimed);
        prop_assert_eq!(cx.input.parity(), cx.truth);
        prop_assert_ne!(cx.claimed, cx.truth);
        for it in &r.trace {
            if it.branch == Branch::Eliminate {
                prop_assert!(it.size_after.unwrap() + 3 <= it.size_before);
            }
        }
        prop_assert!(r.trace.len() <= c.num_inputs() as usize - 2);
    }

    #[test]
    fn maximal_sensitivity(row in any::<u64>(), n in 1u32..10, i in 0u32..10) {
        let a = gatelim::circuit::Assignment::from_index(n, row);
        let i = 1 + i % n;
        prop_assert_ne!(a.parity(), a.flipped(i).parity());
    }
}

#[test]
fn xor_circuits_are_self_reducible() {
    for n in 3..=6 {
        let c = xor_chain(n);
        for i in 1..=n {
            for b in [false, true] {
                let (s, _) = normalize_circuit(&substitute_input(&c, i, b).unwrap(), Strategy::Deterministic).unwrap();
                let t = truth_table(&s).unwrap();
                let expect = TruthTable::from_fn(n, |a| a.parity() ^ a.get(i) ^ b);
                assert!(t == expect, "n={n} x{i}={b}");
                assert!(!s.read_inputs().contains(&i));
            }
        }
    }
}

#[test]
fn correct_xor_is_not_refutable() {
    assert!(matches!(refute(&xor_chain(5)), Err(RefuteError::Precondition(_))));
}

#[test]
fn constant_outcome() {
    // x1 feeds the first gate and also the output gate.
    let mut b = CircuitBuilder::demorgan(4);
    let (x1, x2, x3, x4) = (b.input(1), b.input(2), b.input(3), b.input(4));
    let h = b.and(x1, x2);
    let g = b.or(h, x4);
    let k = b.and(g, x3);
    let f = b.or(x1, k);
    let c = b.finish(f).unwrap();
    let (o, trace) = search_bad_restriction(&c).unwrap();
    assert_eq!(o.tag, OutcomeTag::Const);
    assert_eq!(trace.last().unwrap().branch, Branch::Const);
    refute(&c).unwrap();
}

#[test]
fn survives_an_elimination() {
    let mut b = CircuitBuilder::demorgan(5);
    let x: Vec<_> = (1..=5).map(|i| b.input(i)).collect();
    let acc = xor_block(&mut b, x[0], x[1]);
    let acc = xor_block(&mut b, acc, x[2]);
    let g = b.and(acc, x[3]);
    let o = b.or(g, x[4]);
    let c = b.finish(o).unwrap();
    let r = refute(&c).unwrap();
    assert!(r.trace.iter().any(|t| t.branch == Branch::Eliminate));
}

#[test]
fn schnorr_bound_for_two_inputs() {
    assert!(schnorr_exhaustive_check().holds());
}
