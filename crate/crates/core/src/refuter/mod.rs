//! Counterexamples for undersized parity circuits.
//!
//! Given a DeMorgan circuit on `n` inputs with fewer than `3(n-1)` binary
//! gates, [`refute`] finds an input on which it disagrees with `XOR_n`. It
//! follows the gate-elimination argument: restrict one variable at a time
//! so that at least three gates disappear, until the circuit either stops
//! depending on an active variable, collapses to a constant, or is left with
//! two active variables and fewer than three gates.

mod schnorr;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{evaluate, topo_order, Assignment, Basis, Circuit, CircuitError, EdgeId, GateLabel, VertexId};
use crate::rewrite::{normal_form_violations, normalize_circuit, substitute_input, RewriteError, Strategy};

pub use schnorr::{schnorr_exhaustive_check, SchnorrReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefuteError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("no counterexample found: {0}")]
    NoCounterexample(String),
    #[error("input x{0} is not read by the circuit")]
    MissingInput(u32),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Partial assignment plus the variables it leaves open.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub fixed: BTreeMap<u32, bool>,
    pub active: BTreeSet<u32>,
}

impl Restriction {
    pub fn empty(n: u32) -> Restriction {
        Restriction { fixed: BTreeMap::new(), active: (1..=n).collect() }
    }

    pub fn fix(&mut self, i: u32, b: bool) {
        self.active.remove(&i);
        self.fixed.insert(i, b);
    }

    /// Total assignment: fixed bits from the restriction, active variables
    /// from `open` (missing ones are 0).
    pub fn complete(&self, n: u32, open: &BTreeMap<u32, bool>) -> Assignment {
        Assignment(
            (1..=n)
                .map(|i| self.fixed.get(&i).or_else(|| open.get(&i)).copied().unwrap_or(false))
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "var")]
pub enum OutcomeTag {
    /// The restricted circuit does not depend on this active variable.
    #[serde(rename = "DEGEN")]
    Degen(u32),
    /// The restricted circuit is constant.
    #[serde(rename = "CONST")]
    Const,
    /// Two active variables remain and fewer than three gates.
    #[serde(rename = "FAILS")]
    Fails,
}

impl fmt::Display for OutcomeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeTag::Degen(j) => write!(f, "DEGEN in x{j}"),
            OutcomeTag::Const => f.write_str("CONST"),
            OutcomeTag::Fails => f.write_str("FAILS"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefuterOutcome {
    pub tag: OutcomeTag,
    pub restriction: Restriction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Degen,
    Const,
    Eliminate,
}

/// One pass through the search loop that reached the choice of `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub active: usize,
    pub h: EdgeId,
    pub p: u32,
    pub q: u32,
    pub branch: Branch,
    pub f: Option<EdgeId>,
    pub f_prime: Option<EdgeId>,
    pub fixed_var: u32,
    pub fixed_bit: bool,
    pub size_before: usize,
    pub size_after: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: Assignment,
    pub claimed: bool,
    pub truth: bool,
}

/// Input index and polarity if `v` is `x_i` or `¬x_i`.
pub fn literal(c: &Circuit, producers: &HashMap<VertexId, EdgeId>, v: VertexId) -> Option<(u32, bool)> {
    let e = c.edge(*producers.get(&v)?)?;
    match e.label {
        GateLabel::Input(i) => Some((i, false)),
        GateLabel::Not => match c.edge(*producers.get(&e.args()[0])?)?.label {
            GateLabel::Input(i) => Some((i, true)),
            _ => None,
        },
        _ => None,
    }
}

/// AND/OR edges with an argument equal to `x_i` or `¬x_i`, in ascending id
/// order.
fn costly_readers(c: &Circuit, i: u32) -> Result<Vec<EdgeId>, RefuteError> {
    c.input_edge(i).ok_or(RefuteError::MissingInput(i))?;
    let producers = c.producers();
    Ok(c.edges()
        .filter(|(_, e)| e.label.is_costly())
        .filter(|(_, e)| e.args().iter().any(|v| matches!(literal(c, &producers, *v), Some((j, _)) if j == i)))
        .map(|(id, _)| id)
        .collect())
}

/// Number of distinct AND/OR gates reading `x_i` or `¬x_i`.
pub fn fanout_costly(c: &Circuit, i: u32) -> Result<usize, RefuteError> {
    Ok(costly_readers(c, i)?.len())
}

/// The value of `x_i` that makes gate `h` constant by a fixing rule: a
/// positive literal fixes AND at 0 and OR at 1, a negated one the reverse.
/// The first qualifying argument decides.
pub fn fixer(c: &Circuit, h: EdgeId, i: u32) -> Result<bool, RefuteError> {
    let e = c.edge(h).ok_or_else(|| RefuteError::Precondition(format!("{h} is not an edge")))?;
    if !e.label.is_costly() {
        return Err(RefuteError::Precondition(format!("{h} is not an AND/OR gate")));
    }
    let producers = c.producers();
    let negated = e
        .args()
        .iter()
        .find_map(|v| literal(c, &producers, *v).filter(|(j, _)| *j == i).map(|(_, neg)| neg))
        .ok_or_else(|| RefuteError::Precondition(format!("{h} does not read x{i}")))?;
    Ok((e.label == GateLabel::Or) ^ negated)
}

fn normalize(c: &Circuit) -> Result<Circuit, RefuteError> {
    Ok(normalize_circuit(c, Strategy::Deterministic)?.0)
}

/// `v` is `target` or the result of a NOT edge over `target`.
fn reads_through_not(c: &Circuit, producers: &HashMap<VertexId, EdgeId>, target: VertexId, v: VertexId) -> bool {
    v == target
        || producers
            .get(&v)
            .and_then(|id| c.edge(*id))
            .is_some_and(|e| e.label == GateLabel::Not && e.args()[0] == target)
}

/// The bad-restriction search for `n > 3` inputs and size below `3(n-1)`.
pub fn search_bad_restriction(c: &Circuit) -> Result<(RefuterOutcome, Vec<IterationTrace>), RefuteError> {
    let n = c.num_inputs();
    if c.basis() != Basis::DeMorgan {
        return Err(RefuteError::Precondition("the refuter needs a DeMorgan circuit".into()));
    }
    if n <= 3 {
        return Err(RefuteError::Precondition(format!("the search needs more than 3 inputs, got {n}")));
    }
    if c.size() >= 3 * (n as usize - 1) {
        return Err(RefuteError::Precondition(format!(
            "circuit has {} binary gates, not fewer than 3(n-1) = {}",
            c.size(),
            3 * (n - 1)
        )));
    }

    let mut alpha = Restriction::empty(n);
    let mut cur = normalize(c)?;
    let mut trace = Vec::new();
    type Found = Result<(RefuterOutcome, Vec<IterationTrace>), RefuteError>;
    let done = |tag: OutcomeTag, alpha: Restriction, trace: Vec<IterationTrace>| -> Found {
        Ok((RefuterOutcome { tag, restriction: alpha }, trace))
    };

    while alpha.active.len() > 2 {
        let read = cur.read_inputs();
        if let Some(&j) = alpha.active.iter().find(|j| !read.contains(j)) {
            return done(OutcomeTag::Degen(j), alpha, trace);
        }
        let violations = normal_form_violations(&cur)?;
        if !violations.is_empty() {
            return Err(RefuteError::Assertion(format!("working circuit not normal: {}", violations.join("; "))));
        }

        let order = topo_order(&cur)?;
        let producers = cur.producers();
        let h = *order
            .iter()
            .find(|id| cur.edge(**id).unwrap().label.is_costly())
            .ok_or_else(|| RefuteError::Assertion("active variables are read but there is no costly gate".into()))?;
        let h_edge = cur.edge(h).unwrap();
        let lits: Vec<_> = h_edge.args().iter().map(|v| literal(&cur, &producers, *v)).collect();
        let (p, q) = match (lits[0], lits[1]) {
            (Some((p, _)), Some((q, _))) if p != q && alpha.active.contains(&p) && alpha.active.contains(&q) => (p, q),
            _ => {
                return Err(RefuteError::Assertion(format!(
                    "first costly gate {h} does not read two distinct active literals"
                )))
            }
        };
        let size_before = cur.size();
        let mut record = IterationTrace {
            iteration: trace.len() + 1,
            active: alpha.active.len(),
            h,
            p,
            q,
            branch: Branch::Degen,
            f: None,
            f_prime: None,
            fixed_var: q,
            fixed_bit: false,
            size_before,
            size_after: None,
        };

        let readers = costly_readers(&cur, p)?;
        if readers.len() == 1 {
            let b = fixer(&cur, h, q)?;
            alpha.fix(q, b);
            record.fixed_bit = b;
            trace.push(record);
            return done(OutcomeTag::Degen(p), alpha, trace);
        }
        let pos = |id: &EdgeId| order.iter().position(|x| x == id).unwrap();
        let f = *readers
            .iter()
            .filter(|id| **id != h)
            .min_by_key(|id| pos(id))
            .expect("fanout above one");
        let f_result = cur.edge(f).unwrap().result();
        let b = fixer(&cur, f, p)?;
        alpha.fix(p, b);
        record.f = Some(f);
        record.fixed_var = p;
        record.fixed_bit = b;

        if reads_through_not(&cur, &producers, f_result, cur.root()) {
            record.branch = Branch::Const;
            trace.push(record);
            return done(OutcomeTag::Const, alpha, trace);
        }
        let f_prime = order
            .iter()
            .copied()
            .filter(|id| {
                let e = cur.edge(*id).unwrap();
                e.label.is_costly() && e.args().iter().any(|v| reads_through_not(&cur, &producers, f_result, *v))
            })
            .min_by_key(pos)
            .ok_or_else(|| RefuteError::Assertion(format!("{f} has no costly successor")))?;
        record.branch = Branch::Eliminate;
        record.f_prime = Some(f_prime);

        let next = normalize(&substitute_input(&cur, p, b)?)?;
        record.size_after = Some(next.size());
        trace.push(record);
        if next.size() + 3 > size_before {
            return Err(RefuteError::Assertion(format!(
                "eliminating x{p} only reduced the size from {size_before} to {}",
                next.size()
            )));
        }
        cur = next;
    }
    if cur.size() >= 3 {
        return Err(RefuteError::Assertion(format!(
            "search ended with {} gates on two active variables",
            cur.size()
        )));
    }
    done(OutcomeTag::Fails, alpha, trace)
}

fn check(c: &Circuit, a: Assignment) -> Result<Option<Counterexample>, RefuteError> {
    let claimed = evaluate(c, &a)?;
    let truth = a.parity();
    Ok((claimed != truth).then_some(Counterexample { input: a, claimed, truth }))
}

/// Turn a search outcome into a concrete disagreeing input.
pub fn extract_counterexample(c: &Circuit, o: &RefuterOutcome) -> Result<Counterexample, RefuteError> {
    let n = c.num_inputs();
    let r = &o.restriction;
    let base = r.complete(n, &BTreeMap::new());
    let flip = match o.tag {
        OutcomeTag::Degen(j) => Some(j),
        OutcomeTag::Const => r.active.first().copied(),
        OutcomeTag::Fails => None,
    };
    let candidates: Vec<Assignment> = match flip {
        Some(j) => vec![base.clone(), base.flipped(j)],
        None => {
            let open: Vec<u32> = r.active.iter().copied().collect();
            (0..1u64 << open.len())
                .map(|bits| {
                    let m = open.iter().enumerate().map(|(k, i)| (*i, bits >> k & 1 == 1)).collect();
                    r.complete(n, &m)
                })
                .collect()
        }
    };
    for a in candidates {
        if let Some(cx) = check(c, a)? {
            return Ok(cx);
        }
    }
    Err(RefuteError::NoCounterexample(format!("no candidate disagrees for outcome {}", o.tag)))
}

/// Search result, counterexample and the per-iteration trace.
#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub counterexample: Counterexample,
    pub outcome: Option<RefuterOutcome>,
    pub trace: Vec<IterationTrace>,
}

/// Find an input where `c` differs from parity. `c` must have at least two
/// inputs and fewer than `3(n-1)` binary gates.
pub fn refute(c: &Circuit) -> Result<Refutation, RefuteError> {
    let n = c.num_inputs();
    if c.basis() != Basis::DeMorgan {
        return Err(RefuteError::Precondition("the refuter needs a DeMorgan circuit".into()));
    }
    if n < 2 {
        return Err(RefuteError::Precondition(format!("need at least 2 inputs, got {n}")));
    }
    let bound = 3 * (n as usize - 1);
    if c.size() >= bound {
        return Err(RefuteError::Precondition(format!(
            "circuit has {} binary gates; the refuter needs fewer than 3(n-1) = {bound}",
            c.size()
        )));
    }
    let refutation = if n <= 3 {
        let mut found = None;
        for a in Assignment::all(n) {
            if let Some(cx) = check(c, a)? {
                found = Some(cx);
                break;
            }
        }
        let counterexample = found.ok_or_else(|| RefuteError::NoCounterexample("brute force".into()))?;
        Refutation { counterexample, outcome: None, trace: Vec::new() }
    } else {
        let (outcome, trace) = search_bad_restriction(c)?;
        let counterexample = extract_counterexample(c, &outcome)?;
        Refutation { counterexample, outcome: Some(outcome), trace }
    };
    let cx = &refutation.counterexample;
    if evaluate(c, &cx.input)? == cx.input.parity() {
        return Err(RefuteError::Assertion(format!("returned input {} agrees with parity", cx.input)));
    }
    Ok(refutation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{xor_block, CircuitBuilder};

    fn and2() -> Circuit {
        let mut b = CircuitBuilder::demorgan(2);
        let (x, y) = (b.input(1), b.input(2));
        let g = b.and(x, y);
        b.finish(g).unwrap()
    }

    #[test]
    fn fanouts() {
        let c = crate::circuit::xor_chain(2);
        assert_eq!(fanout_costly(&c, 1).unwrap(), 2);
        assert_eq!(fanout_costly(&and2(), 1).unwrap(), 1);
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let n = b.not(x);
        let c = b.finish(n).unwrap();
        assert_eq!(fanout_costly(&c, 1).unwrap(), 0);
        assert_eq!(fanout_costly(&c, 2), Err(RefuteError::MissingInput(2)));
    }

    fn gate_with(neg_first: bool, or: bool) -> (Circuit, EdgeId) {
        let mut b = CircuitBuilder::demorgan(2);
        let (x, y) = (b.input(1), b.input(2));
        let l = if neg_first { b.not(x) } else { x };
        let g = if or { b.or(l, y) } else { b.and(l, y) };
        let c = b.finish(g).unwrap();
        let h = c.producer_of(c.root()).unwrap().0;
        (c, h)
    }

    #[test]
    fn fixers() {
        let (c, h) = gate_with(false, false);
        assert!(!fixer(&c, h, 2).unwrap());
        let (c, h) = gate_with(true, true);
        assert!(!fixer(&c, h, 1).unwrap());
        let (c, h) = gate_with(true, false);
        assert!(fixer(&c, h, 1).unwrap());
        for neg in [false, true] {
            for or in [false, true] {
                let (c, h) = gate_with(neg, or);
                let b = fixer(&c, h, 1).unwrap();
                let s = normalize(&substitute_input(&c, 1, b).unwrap()).unwrap();
                assert!(s.as_constant().is_some(), "neg={neg} or={or}");
            }
        }
        assert!(fixer(&c, h, 3).is_err());
    }

    #[test]
    fn unread_variable_is_degenerate_immediately() {
        let mut b = CircuitBuilder::demorgan(4);
        let (x1, x2, x3) = (b.input(1), b.input(2), b.input(3));
        let a = b.and(x1, x2);
        let g = b.and(a, x3);
        let c = b.finish(g).unwrap();
        let (o, trace) = search_bad_restriction(&c).unwrap();
        assert_eq!(o.tag, OutcomeTag::Degen(4));
        assert!(o.restriction.fixed.is_empty() && trace.is_empty());
        let cx = extract_counterexample(&c, &o).unwrap();
        assert_eq!(cx.input.to_string(), "0001");
        assert!(!cx.claimed && cx.truth);
    }

    #[test]
    fn and_chain_has_fanout_one() {
        let mut b = CircuitBuilder::demorgan(5);
        let mut v = b.input(1);
        for i in 2..=5 {
            let xi = b.input(i);
            v = b.and(v, xi);
        }
        let c = b.finish(v).unwrap();
        let (o, trace) = search_bad_restriction(&c).unwrap();
        assert!(matches!(o.tag, OutcomeTag::Degen(_)));
        assert_eq!(o.restriction.fixed.len(), 1);
        assert_eq!(trace.len(), 1);
        refute(&c).unwrap();
    }

    #[test]
    fn small_inputs_use_brute_force() {
        let r = refute(&and2()).unwrap();
        assert!(["10", "01"].contains(&r.counterexample.input.to_string().as_str()));
        let mut b = CircuitBuilder::demorgan(3);
        let (x1, x2, x3) = (b.input(1), b.input(2), b.input(3));
        let a = b.and(x1, x2);
        let g = b.and(a, x3);
        let r = refute(&b.finish(g).unwrap()).unwrap();
        assert_eq!(r.counterexample.input.to_string(), "100");
    }

    #[test]
    fn xor4_ignoring_x5() {
        let mut b = CircuitBuilder::demorgan(5);
        let mut acc = b.input(1);
        for i in 2..=4 {
            let xi = b.input(i);
            acc = xor_block(&mut b, acc, xi);
        }
        let c = b.finish(acc).unwrap();
        assert_eq!(c.size(), 9);
        let r = refute(&c).unwrap();
        assert_eq!(r.outcome.unwrap().tag, OutcomeTag::Degen(5));
    }

    #[test]
    fn oversized_circuits_are_rejected() {
        let c = crate::circuit::xor_chain(4);
        assert!(matches!(refute(&c), Err(RefuteError::Precondition(_))));
    }
}
