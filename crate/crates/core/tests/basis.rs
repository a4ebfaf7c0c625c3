mod common;

use common::{random_nondegenerate_circuit, GenConfig};
use gatelim::basis::{
    demorgan_to_u2, nonconfluence_witness, push_down, push_up, u2_to_demorgan, BasisError, U2Op,
};
use gatelim::circuit::text::{parse_circuit, serialize_circuit};
use gatelim::circuit::{isomorphic, truth_table, Circuit, CircuitBuilder, GateLabel};
use gatelim::rewrite::{normalize_circuit, Strategy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn u2(text: &str) -> Circuit {
    parse_circuit(&format!("ckt 1\nbasis u2\ninputs 3\n{text}")).unwrap()
}

fn root_label(c: &Circuit) -> GateLabel {
    c.producer_of(c.root()).unwrap().1.label
}

fn op(k: u8) -> GateLabel {
    GateLabel::U2(U2Op::new(k).unwrap())
}

fn edge_with(c: &Circuit, k: u8) -> gatelim::circuit::EdgeId {
    c.edges().find(|(_, e)| e.label == op(k)).unwrap().0
}

#[test]
fn demorgan_gates_become_single_u2_gates() {
    let mut b = CircuitBuilder::demorgan(2);
    let (x, y) = (b.input(1), b.input(2));
    let g = b.and(x, y);
    let c = demorgan_to_u2(&b.finish(g).unwrap()).unwrap();
    assert_eq!((c.size(), root_label(&c)), (1, op(11)));

    let mut b = CircuitBuilder::demorgan(2);
    let (x, y) = (b.input(1), b.input(2));
    let nx = b.not(x);
    let g = b.and(nx, y);
    let c = demorgan_to_u2(&b.finish(g).unwrap()).unwrap();
    assert_eq!((c.size(), root_label(&c)), (1, op(8)));

    let mut b = CircuitBuilder::demorgan(2);
    let (x, y) = (b.input(1), b.input(2));
    let g = b.or(x, y);
    let n = b.not(g);
    let c = demorgan_to_u2(&b.finish(n).unwrap()).unwrap();
    assert_eq!((c.size(), root_label(&c)), (1, op(14)));

    let mut b = CircuitBuilder::demorgan(1);
    let x = b.input(1);
    let n = b.not(x);
    assert_eq!(demorgan_to_u2(&b.finish(n).unwrap()).unwrap_err(), BasisError::Degenerate);
}

#[test]
fn u2_gates_become_demorgan_gates() {
    let cases = [(8, "(and (not x1) x2)"), (13, "(or x1 x2)"), (12, "(or (not x1) (not x2))")];
    for (k, term) in cases {
        let c = u2(&format!("n1 = U2_{k} x1 x2\noutput n1\n"));
        let d = u2_to_demorgan(&c).unwrap();
        assert_eq!(gatelim::circuit::unroll_term(&d).unwrap().to_string(), term);
        assert_eq!(d.size(), 1);
    }
    let c = u2("n1 = U2_3 x1 x2\nn2 = U2_11 n1 x3\noutput n2\n");
    assert!(matches!(u2_to_demorgan(&c), Err(BasisError::ResidualDegenerate { .. })));
}

#[test]
fn push_moves() {
    let c = u2("n1 = U2_11 x1 x2\nn2 = U2_4 n1 x3\nn3 = U2_10 n2 x3\noutput n3\n");
    let up = push_up(&c, edge_with(&c, 4)).unwrap();
    assert_eq!(root_label(&up), op(14));
    assert_eq!(truth_table(&up).unwrap(), truth_table(&c).unwrap());

    let c = u2("n1 = U2_11 x1 x2\nn2 = U2_4 n1 x3\nn3 = U2_7 x3 n2\noutput n3\n");
    assert_eq!(root_label(&push_up(&c, edge_with(&c, 4)).unwrap()), op(13));

    let c = u2("n1 = U2_6 x1 x2\nn2 = U2_11 n1 x3\noutput n2\n");
    let up = push_up(&c, edge_with(&c, 6)).unwrap();
    assert_eq!(root_label(&up), op(8));
    assert_eq!(truth_table(&up).unwrap(), truth_table(&c).unwrap());

    let c = u2("n1 = U2_11 x1 x2\nn2 = U2_4 n1 x3\noutput n2\n");
    let down = push_down(&c, edge_with(&c, 4)).unwrap();
    assert_eq!(root_label(&down), op(12));
    assert_eq!(truth_table(&down).unwrap(), truth_table(&c).unwrap());
    assert!(matches!(push_up(&c, edge_with(&c, 4)), Err(BasisError::NoSuccessor(_))));

    let c = u2("n1 = U2_4 x1 x2\nn2 = U2_11 n1 x3\noutput n2\n");
    assert!(matches!(push_down(&c, edge_with(&c, 4)), Err(BasisError::CannotPushDown(_))));
}

#[test]
fn witness_is_not_confluent() {
    let w = nonconfluence_witness().unwrap();
    let t = truth_table(&w.original).unwrap();
    assert_eq!(truth_table(&w.pushed_up).unwrap(), t);
    assert_eq!(truth_table(&w.pushed_down).unwrap(), t);
    assert!(!isomorphic(&w.pushed_up, &w.pushed_down));
    assert_eq!(w.original.size(), 3);
    assert_eq!((w.pushed_up.size(), w.pushed_down.size()), (2, 2));
    assert_eq!(root_label(&w.pushed_up), op(14));
    assert_eq!(root_label(&w.pushed_down), op(10));
    assert!(serialize_circuit(&w.pushed_down).contains("U2_7"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip_preserves_function_and_size(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = GenConfig { inputs: 2 + (seed % 4) as u32, gates: 1 + (seed / 5 % 10) as usize, constant_rate: 0.1 };
        let c = random_nondegenerate_circuit(&mut rng, cfg);
        let (n, _) = normalize_circuit(&c, Strategy::Deterministic).unwrap();
        let u = demorgan_to_u2(&c).unwrap();
        prop_assert_eq!(u.size(), n.size());
        let back = u2_to_demorgan(&u).unwrap();
        prop_assert_eq!(back.size(), n.size());
        prop_assert_eq!(truth_table(&back).unwrap(), truth_table(&c).unwrap());
        prop_assert_eq!(truth_table(&u).unwrap(), truth_table(&c).unwrap());
    }
}
