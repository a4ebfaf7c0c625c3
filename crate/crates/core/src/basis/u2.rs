//! The fourteen non-parity binary operations and the relabeling tables used
//! to move negations through them.

use std::fmt;

use thiserror::Error;

/// Truth table rows, in order: (p,q) = TT, TF, FT, FF.
const TRUTH: [[bool; 4]; 14] = [
    [true, true, true, true],     // *1
    [false, false, false, false], // *2
    [true, true, false, false],   // *3  p
    [false, false, true, true],   // *4  not p
    [true, false, true, false],   // *5  q
    [false, true, false, true],   // *6  not q
    [true, true, false, true],    // *7
    [false, false, true, false],  // *8
    [true, false, true, true],    // *9
    [false, true, false, false],  // *10
    [true, false, false, false],  // *11
    [false, true, true, true],    // *12
    [true, true, true, false],    // *13
    [false, false, false, true],  // *14
];

/// Relabeling after removing a negation feeding the first argument
/// (row `¬p, q`) and the second argument (row `p, ¬q`), for ops 7..=14.
const NEGATED_P: [u8; 8] = [12, 11, 13, 14, 8, 7, 9, 10];
const NEGATED_Q: [u8; 8] = [13, 14, 12, 11, 10, 9, 7, 8];

/// Output complement, for ops 7..=14.
const COMPLEMENT: [u8; 8] = [8, 7, 10, 9, 12, 11, 14, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryKind {
    And,
    Or,
}

/// A single DeMorgan gate with optional negations on its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeMorganForm {
    pub kind: BinaryKind,
    pub negate_p: bool,
    pub negate_q: bool,
}

const DEMORGAN: [DeMorganForm; 8] = [
    DeMorganForm { kind: BinaryKind::Or, negate_p: false, negate_q: true },   // *7
    DeMorganForm { kind: BinaryKind::And, negate_p: true, negate_q: false },  // *8
    DeMorganForm { kind: BinaryKind::Or, negate_p: true, negate_q: false },   // *9
    DeMorganForm { kind: BinaryKind::And, negate_p: false, negate_q: true },  // *10
    DeMorganForm { kind: BinaryKind::And, negate_p: false, negate_q: false }, // *11
    DeMorganForm { kind: BinaryKind::Or, negate_p: true, negate_q: true },    // *12
    DeMorganForm { kind: BinaryKind::Or, negate_p: false, negate_q: false },  // *13
    DeMorganForm { kind: BinaryKind::And, negate_p: true, negate_q: true },   // *14
];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("U2 operation index {0} is outside 1..=14")]
pub struct BadOpIndex(pub u8);

/// Which argument slot a negation is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    P,
    Q,
}

/// A U2 operation `*k`, `1 <= k <= 14`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct U2Op(u8);

impl U2Op {
    pub fn new(k: u8) -> Result<U2Op, BadOpIndex> {
        if (1..=14).contains(&k) {
            Ok(U2Op(k))
        } else {
            Err(BadOpIndex(k))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = U2Op> {
        (1..=14).map(U2Op)
    }

    /// The eight ops that depend on both arguments.
    pub fn nondegenerate() -> impl Iterator<Item = U2Op> {
        (7..=14).map(U2Op)
    }

    pub fn truth_table(self) -> [bool; 4] {
        TRUTH[usize::from(self.0 - 1)]
    }

    pub fn apply(self, p: bool, q: bool) -> bool {
        let row = match (p, q) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        };
        self.truth_table()[row]
    }

    pub fn is_nondegenerate(self) -> bool {
        self.0 >= 7
    }

    /// `*4` or `*6`: a bare negation of one argument.
    pub fn negated_slot(self) -> Option<Slot> {
        match self.0 {
            4 => Some(Slot::P),
            6 => Some(Slot::Q),
            _ => None,
        }
    }

    /// The op that computes `self` when the argument in `slot` arrives
    /// without the negation it used to have.
    pub fn absorb_negation(self, slot: Slot) -> Option<U2Op> {
        let i = usize::from(self.0.checked_sub(7)?);
        let row = match slot {
            Slot::P => &NEGATED_P,
            Slot::Q => &NEGATED_Q,
        };
        row.get(i).map(|&k| U2Op(k))
    }

    /// The op computing the negation of `self`.
    pub fn complement(self) -> Option<U2Op> {
        let i = usize::from(self.0.checked_sub(7)?);
        COMPLEMENT.get(i).map(|&k| U2Op(k))
    }

    /// The single-gate DeMorgan realization of `self`.
    pub fn demorgan_form(self) -> Option<DeMorganForm> {
        let i = usize::from(self.0.checked_sub(7)?);
        DEMORGAN.get(i).copied()
    }

    /// Inverse of [`U2Op::demorgan_form`].
    pub fn from_demorgan(form: DeMorganForm) -> U2Op {
        let i = DEMORGAN.iter().position(|f| *f == form).expect("all eight forms are tabulated");
        U2Op(7 + i as u8)
    }
}

impl fmt::Display for U2Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*{}", self.0)
    }
}

/// Truth value of `*k(p, q)`.
pub fn u2_semantics(k: u8, p: bool, q: bool) -> Result<bool, BadOpIndex> {
    Ok(U2Op::new(k)?.apply(p, q))
}
