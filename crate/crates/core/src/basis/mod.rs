//! The U2 basis: operation tables, translations to and from DeMorgan
//! circuits, the two negation-elimination moves and the non-confluence
//! witness.

mod push;
mod translate;
pub mod u2;

use thiserror::Error;

use crate::circuit::text::{parse_circuit, ParseCircuitError};
use crate::circuit::{Basis, Circuit, CircuitError, EdgeId, GateLabel, InvalidCircuit};
use crate::rewrite::RewriteError;

pub use push::{first_negation_gate, push_down, push_up};
pub use translate::{demorgan_to_u2, eliminate_negation_gates, u2_to_demorgan};
pub use u2::{u2_semantics, BadOpIndex, BinaryKind, DeMorganForm, Slot, U2Op};

const WITNESS: &str = include_str!("../../data/nonconfluence.ckt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("expected a circuit in basis {expected}")]
    WrongBasis { expected: Basis },
    #[error("circuit has no binary gate (a literal or a constant)")]
    Degenerate,
    #[error("{edge} is a degenerate {op} gate")]
    ResidualDegenerate { edge: EdgeId, op: U2Op },
    #[error("{0} is not a *4 or *6 gate")]
    NotNegationGate(EdgeId),
    #[error("{0} has no successor to push the negation into")]
    NoSuccessor(EdgeId),
    #[error("successor {edge} is a degenerate {op} gate")]
    DegenerateSuccessor { edge: EdgeId, op: U2Op },
    #[error("cannot push down: {0}")]
    CannotPushDown(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Invalid(#[from] InvalidCircuit),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Parse(#[from] ParseCircuitError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A U2 circuit with one removable `*4` gate, and the results of removing
/// it by pushing up and by pushing down.
#[derive(Clone, Debug)]
pub struct Witness {
    pub original: Circuit,
    pub pushed_up: Circuit,
    pub pushed_down: Circuit,
}

/// The pinned witness that negation elimination in U2 is not confluent: the
/// two results compute the same function but are not isomorphic.
pub fn nonconfluence_witness() -> Result<Witness, BasisError> {
    let original = parse_circuit(WITNESS)?;
    let e = original
        .edges()
        .find(|(_, e)| matches!(e.label, GateLabel::U2(op) if op.index() == 4))
        .map(|(id, _)| id)
        .ok_or_else(|| BasisError::Internal("witness has no *4 gate".into()))?;
    Ok(Witness { pushed_up: push_up(&original, e)?, pushed_down: push_down(&original, e)?, original })
}
