//! Size-preserving translations between DeMorgan and U2 circuits.

use std::collections::HashMap;

use crate::circuit::{topo_order, Basis, Circuit, CircuitBuilder, GateLabel, VertexId};
use crate::rewrite::{normalize_circuit, Strategy};

use super::push::{first_negation_gate, push_down, push_up};
use super::u2::{BinaryKind, DeMorganForm, U2Op};
use super::BasisError;

/// Translate a DeMorgan circuit into a U2 circuit with the same number of
/// binary gates as its normal form.
///
/// Every AND/OR gate together with the negations on its two arguments
/// becomes one U2 gate; a negated output complements the gate below it.
pub fn demorgan_to_u2(c: &Circuit) -> Result<Circuit, BasisError> {
    if c.basis() != Basis::DeMorgan {
        return Err(BasisError::WrongBasis { expected: Basis::DeMorgan });
    }
    let c = normalize_circuit(c, Strategy::Deterministic)?.0;
    if c.size() == 0 {
        return Err(BasisError::Degenerate);
    }
    let producers = c.producers();
    let label_of = |v: VertexId| c.edge(producers[&v]).unwrap();

    // A negated output is folded into the gate that feeds it.
    let root_edge = label_of(c.root());
    let (top, complemented) = if root_edge.label == GateLabel::Not {
        (root_edge.args()[0], Some(root_edge.args()[0]))
    } else {
        (c.root(), None)
    };

    let strip = |v: VertexId| -> (VertexId, bool) {
        let e = label_of(v);
        let (src, neg) = if e.label == GateLabel::Not { (e.args()[0], true) } else { (v, false) };
        (src, neg ^ (Some(src) == complemented))
    };

    let mut b = CircuitBuilder::u2(c.num_inputs());
    let mut image: HashMap<VertexId, VertexId> = HashMap::new();
    for id in topo_order(&c)? {
        let e = c.edge(id).unwrap();
        let kind = match e.label {
            GateLabel::Input(i) => {
                image.insert(e.result(), b.input(i));
                continue;
            }
            GateLabel::And => BinaryKind::And,
            GateLabel::Or => BinaryKind::Or,
            GateLabel::Not => continue,
            other => return Err(BasisError::Internal(format!("{other} edge in a normal form"))),
        };
        let (p, negate_p) = strip(e.args()[0]);
        let (q, negate_q) = strip(e.args()[1]);
        let mut op = U2Op::from_demorgan(DeMorganForm { kind, negate_p, negate_q });
        if Some(e.result()) == complemented {
            op = op.complement().expect("non-degenerate");
        }
        let (Some(&p), Some(&q)) = (image.get(&p), image.get(&q)) else {
            return Err(BasisError::Internal(format!("{id} reads a vertex with no U2 image")));
        };
        image.insert(e.result(), b.u2_gate(op, p, q));
    }
    let root = *image.get(&top).ok_or(BasisError::Degenerate)?;
    Ok(b.finish(root)?)
}

/// Remove every `*4`/`*6` gate: push up while the gate has a successor,
/// otherwise push down.
pub fn eliminate_negation_gates(c: &Circuit) -> Result<Circuit, BasisError> {
    let mut cur = c.clone();
    while let Some(e) = first_negation_gate(&cur)? {
        let has_successor = cur.readers().contains_key(&cur.edge(e).unwrap().result());
        cur = if has_successor { push_up(&cur, e)? } else { push_down(&cur, e)? };
    }
    Ok(cur)
}

/// Translate a U2 circuit into a DeMorgan circuit with the same number of
/// binary gates, after removing any `*4`/`*6` gates.
pub fn u2_to_demorgan(c: &Circuit) -> Result<Circuit, BasisError> {
    if c.basis() != Basis::U2 {
        return Err(BasisError::WrongBasis { expected: Basis::U2 });
    }
    let c = eliminate_negation_gates(c)?;
    let mut b = CircuitBuilder::demorgan(c.num_inputs());
    let mut image: HashMap<VertexId, VertexId> = HashMap::new();
    let mut negated: HashMap<VertexId, VertexId> = HashMap::new();
    for id in topo_order(&c)? {
        let e = c.edge(id).unwrap();
        let op = match e.label {
            GateLabel::Input(i) => {
                image.insert(e.result(), b.input(i));
                continue;
            }
            GateLabel::U2(op) => op,
            other => return Err(BasisError::Internal(format!("{other} edge in a U2 circuit"))),
        };
        let form = op.demorgan_form().ok_or(BasisError::ResidualDegenerate { edge: id, op })?;
        let mut arg = |v: VertexId, neg: bool| {
            let w = image[&v];
            if !neg {
                return w;
            }
            *negated.entry(v).or_insert_with(|| b.not(w))
        };
        let p = arg(e.args()[0], form.negate_p);
        let q = arg(e.args()[1], form.negate_q);
        let g = match form.kind {
            BinaryKind::And => b.and(p, q),
            BinaryKind::Or => b.or(p, q),
        };
        image.insert(e.result(), g);
    }
    Ok(b.finish(image[&c.root()])?)
}
