//! Removing a `*4` / `*6` gate, which only negates one argument.

use crate::circuit::{Basis, Circuit, EdgeId, GateLabel};

use super::u2::Slot;
use super::BasisError;

fn negation_gate(c: &Circuit, e: EdgeId) -> Result<(Slot, usize), BasisError> {
    if c.basis() != Basis::U2 {
        return Err(BasisError::WrongBasis { expected: Basis::U2 });
    }
    match c.edge(e).map(|g| g.label) {
        Some(GateLabel::U2(op)) => match op.negated_slot() {
            Some(Slot::P) => Ok((Slot::P, 0)),
            Some(Slot::Q) => Ok((Slot::Q, 1)),
            None => Err(BasisError::NotNegationGate(e)),
        },
        _ => Err(BasisError::NotNegationGate(e)),
    }
}

fn slot(k: usize) -> Slot {
    if k == 0 {
        Slot::P
    } else {
        Slot::Q
    }
}

/// Delete the negation gate `e` and relabel every gate reading it so that it
/// absorbs the negation.
pub fn push_up(c: &Circuit, e: EdgeId) -> Result<Circuit, BasisError> {
    let (_, arg) = negation_gate(c, e)?;
    let edge = c.edge(e).unwrap();
    let (result, source) = (edge.result(), edge.args()[arg]);
    let readers = c.readers().remove(&result).unwrap_or_default();
    if readers.is_empty() {
        return Err(BasisError::NoSuccessor(e));
    }
    let mut out = c.clone();
    for (r, k) in readers {
        let reader = out.edge_mut(r).unwrap();
        let op = match reader.label {
            GateLabel::U2(op) => op,
            other => return Err(BasisError::Internal(format!("{r} labeled {other} in a U2 circuit"))),
        };
        let relabeled = op.absorb_negation(slot(k)).ok_or(BasisError::DegenerateSuccessor { edge: r, op })?;
        reader.label = GateLabel::U2(relabeled);
        reader.att[k + 1] = source;
    }
    out.remove_edge(e);
    out.collect_garbage();
    Ok(out)
}

/// Delete the negation gate `e` and complement the gate producing its
/// negated argument instead. That gate must be binary, non-degenerate and
/// read only by `e`.
pub fn push_down(c: &Circuit, e: EdgeId) -> Result<Circuit, BasisError> {
    let (_, arg) = negation_gate(c, e)?;
    let edge = c.edge(e).unwrap();
    let (result, source) = (edge.result(), edge.args()[arg]);
    let (pid, producer) = c.producer_of(source).ok_or_else(|| BasisError::Internal(format!("{source} has no producer")))?;
    let op = match producer.label {
        GateLabel::U2(op) => op,
        other => {
            return Err(BasisError::CannotPushDown(format!("the negated argument is produced by {other}")));
        }
    };
    let complement = op
        .complement()
        .ok_or_else(|| BasisError::CannotPushDown(format!("the negated argument is produced by degenerate {op}")))?;
    let other_readers = c.readers().get(&source).map_or(0, |rs| rs.iter().filter(|(r, _)| *r != e).count());
    if other_readers > 0 {
        return Err(BasisError::CannotPushDown(format!("{pid} has readers besides {e}")));
    }
    let mut out = c.clone();
    out.edge_mut(pid).unwrap().label = GateLabel::U2(complement);
    out.remove_edge(e);
    out.merge_vertex(result, source);
    out.collect_garbage();
    Ok(out)
}

/// The first `*4`/`*6` edge in topological order, if any.
pub fn first_negation_gate(c: &Circuit) -> Result<Option<EdgeId>, BasisError> {
    let order = crate::circuit::topo_order(c)?;
    Ok(order.into_iter().find(|id| {
        matches!(c.edge(*id).unwrap().label, GateLabel::U2(op) if op.negated_slot().is_some())
    }))
}
