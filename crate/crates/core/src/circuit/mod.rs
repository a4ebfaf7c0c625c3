//! Circuits as rooted acyclic hypergraphs.
//!
//! Vertices are wires and hyperedges are gates. Each edge carries a label and
//! an attachment string `att(e) = v0 v1 .. vk` whose first vertex is the
//! gate's result and whose remaining vertices are its arguments in order. A
//! valid circuit is a term graph: every vertex is reachable from the root,
//! there are no cycles, and every vertex is the result of exactly one edge.

mod equiv;
mod eval;
pub mod text;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::basis::u2::U2Op;

pub use equiv::{bisimilar, isomorphic, unroll_term, VertexClasses, UNROLL_BUDGET};
pub use eval::{evaluate, parity, topo_order, truth_table, Assignment, CircuitError, TruthTable};
pub use validate::{validate, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    DeMorgan,
    U2,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::DeMorgan => "demorgan",
            Basis::U2 => "u2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateLabel {
    /// Input variable `x_i`, `i >= 1`.
    Input(u32),
    Const0,
    Const1,
    Not,
    And,
    Or,
    U2(U2Op),
}

impl GateLabel {
    pub fn arity(self) -> usize {
        match self {
            GateLabel::Input(_) | GateLabel::Const0 | GateLabel::Const1 => 0,
            GateLabel::Not => 1,
            GateLabel::And | GateLabel::Or | GateLabel::U2(_) => 2,
        }
    }

    /// Binary gates are the ones counted by circuit size.
    pub fn is_binary(self) -> bool {
        self.arity() == 2
    }

    /// An AND or OR gate.
    pub fn is_costly(self) -> bool {
        matches!(self, GateLabel::And | GateLabel::Or)
    }

    pub fn allowed_in(self, basis: Basis) -> bool {
        match self {
            GateLabel::Input(_) => true,
            GateLabel::U2(_) => basis == Basis::U2,
            _ => basis == Basis::DeMorgan,
        }
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateLabel::Input(i) => write!(f, "x{i}"),
            GateLabel::Const0 => f.write_str("CONST0"),
            GateLabel::Const1 => f.write_str("CONST1"),
            GateLabel::Not => f.write_str("NOT"),
            GateLabel::And => f.write_str("AND"),
            GateLabel::Or => f.write_str("OR"),
            GateLabel::U2(op) => write!(f, "U2_{}", op.index()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: GateLabel,
    /// Result vertex first, then arguments.
    pub att: Vec<VertexId>,
}

impl Edge {
    pub fn result(&self) -> VertexId {
        self.att[0]
    }

    pub fn args(&self) -> &[VertexId] {
        &self.att[1..]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    basis: Basis,
    num_inputs: u32,
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    root: VertexId,
    next_vertex: u32,
    next_edge: u32,
}

impl Circuit {
    /// Assemble a hypergraph without checking any invariant. Use
    /// [`validate`] to inspect the result.
    pub fn from_parts(
        basis: Basis,
        num_inputs: u32,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, Edge)>,
        root: VertexId,
    ) -> Circuit {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let edges: BTreeMap<_, _> = edges.into_iter().collect();
        let next_vertex = vertices.iter().map(|v| v.0 + 1).max().unwrap_or(0).max(root.0 + 1);
        let next_edge = edges.keys().map(|e| e.0 + 1).max().unwrap_or(0);
        Circuit { basis, num_inputs, vertices, edges, root, next_vertex, next_edge }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn num_inputs(&self) -> u32 {
        self.num_inputs
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    /// Number of binary gates; negations, constants and inputs are free.
    pub fn size(&self) -> usize {
        self.edges.values().filter(|e| e.label.is_binary()).count()
    }

    /// Map from each vertex to the edge producing it.
    pub fn producers(&self) -> HashMap<VertexId, EdgeId> {
        self.edges.iter().map(|(id, e)| (e.result(), *id)).collect()
    }

    /// Map from each vertex to the `(edge, argument index)` pairs reading it.
    /// Argument indices count from zero.
    pub fn readers(&self) -> HashMap<VertexId, Vec<(EdgeId, usize)>> {
        let mut out: HashMap<VertexId, Vec<(EdgeId, usize)>> = HashMap::new();
        for (id, e) in &self.edges {
            for (k, v) in e.args().iter().enumerate() {
                out.entry(*v).or_default().push((*id, k));
            }
        }
        out
    }

    pub fn producer_of(&self, v: VertexId) -> Option<(EdgeId, &Edge)> {
        self.edges().find(|(_, e)| e.result() == v)
    }

    pub fn input_edge(&self, i: u32) -> Option<EdgeId> {
        self.edges().find(|(_, e)| e.label == GateLabel::Input(i)).map(|(id, _)| id)
    }

    /// Indices of inputs that have an edge in the circuit, ascending.
    pub fn read_inputs(&self) -> BTreeSet<u32> {
        self.edges
            .values()
            .filter_map(|e| match e.label {
                GateLabel::Input(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// `Some(b)` when the circuit is exactly `CONST1` (`b = true`) or
    /// `NOT CONST1` (`b = false`).
    pub fn as_constant(&self) -> Option<bool> {
        let (_, e) = self.producer_of(self.root)?;
        match e.label {
            GateLabel::Const1 if self.edges.len() == 1 => Some(true),
            GateLabel::Not if self.edges.len() == 2 => {
                let (_, inner) = self.producer_of(e.args()[0])?;
                (inner.label == GateLabel::Const1).then_some(false)
            }
            _ => None,
        }
    }

    pub(crate) fn fresh_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(v);
        v
    }

    pub(crate) fn add_edge(&mut self, label: GateLabel, att: Vec<VertexId>) -> EdgeId {
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.vertices.extend(att.iter().copied());
        self.edges.insert(id, Edge { label, att });
        id
    }

    pub(crate) fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        self.edges.remove(&id)
    }

    pub(crate) fn edge_mut(&mut self, id: EdgeId) -> Option<&mut Edge> {
        self.edges.get_mut(&id)
    }

    pub(crate) fn set_root(&mut self, v: VertexId) {
        self.root = v;
    }

    /// Redirect every reference to `from` (attachments and root) to `to`,
    /// and drop `from`.
    pub(crate) fn merge_vertex(&mut self, from: VertexId, to: VertexId) {
        for e in self.edges.values_mut() {
            for v in e.att.iter_mut() {
                if *v == from {
                    *v = to;
                }
            }
        }
        if self.root == from {
            self.root = to;
        }
        self.vertices.remove(&from);
    }

    /// Remove every vertex and edge not reachable from the root. Returns the
    /// removed edges in ascending id order.
    pub fn collect_garbage(&mut self) -> Vec<EdgeId> {
        let producers = self.producers();
        let mut live_vertices = BTreeSet::new();
        let mut live_edges = BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if !live_vertices.insert(v) {
                continue;
            }
            if let Some(id) = producers.get(&v) {
                live_edges.insert(*id);
                stack.extend(self.edges[id].args().iter().copied());
            }
        }
        let dead: Vec<EdgeId> = self.edges.keys().filter(|id| !live_edges.contains(id)).copied().collect();
        for id in &dead {
            self.edges.remove(id);
        }
        self.vertices = live_vertices;
        dead
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid circuit: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidCircuit(pub Vec<Violation>);

/// Incremental construction of a valid circuit.
///
/// Inputs are shared: asking for `x_i` twice returns the same vertex.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    circuit: Circuit,
    inputs: HashMap<u32, VertexId>,
}

impl CircuitBuilder {
    pub fn new(basis: Basis, num_inputs: u32) -> CircuitBuilder {
        CircuitBuilder {
            circuit: Circuit::from_parts(basis, num_inputs, [], [], VertexId(0)),
            inputs: HashMap::new(),
        }
    }

    pub fn demorgan(num_inputs: u32) -> CircuitBuilder {
        Self::new(Basis::DeMorgan, num_inputs)
    }

    pub fn u2(num_inputs: u32) -> CircuitBuilder {
        Self::new(Basis::U2, num_inputs)
    }

    pub fn input(&mut self, i: u32) -> VertexId {
        if let Some(v) = self.inputs.get(&i) {
            return *v;
        }
        let v = self.gate(GateLabel::Input(i), &[]);
        self.inputs.insert(i, v);
        v
    }

    /// Add one edge with a fresh result vertex.
    ///
    /// # Panics
    /// If the number of arguments does not match the label's arity, or if an
    /// input label is added twice.
    pub fn gate(&mut self, label: GateLabel, args: &[VertexId]) -> VertexId {
        assert_eq!(label.arity(), args.len(), "arity of {label}");
        if let GateLabel::Input(i) = label {
            assert!(!self.inputs.contains_key(&i), "input x{i} added twice");
        }
        let v = self.circuit.fresh_vertex();
        let mut att = vec![v];
        att.extend_from_slice(args);
        self.circuit.add_edge(label, att);
        if let GateLabel::Input(i) = label {
            self.inputs.insert(i, v);
        }
        v
    }

    pub fn constant(&mut self, value: bool) -> VertexId {
        self.gate(if value { GateLabel::Const1 } else { GateLabel::Const0 }, &[])
    }

    pub fn not(&mut self, a: VertexId) -> VertexId {
        self.gate(GateLabel::Not, &[a])
    }

    pub fn and(&mut self, a: VertexId, b: VertexId) -> VertexId {
        self.gate(GateLabel::And, &[a, b])
    }

    pub fn or(&mut self, a: VertexId, b: VertexId) -> VertexId {
        self.gate(GateLabel::Or, &[a, b])
    }

    pub fn u2_gate(&mut self, op: U2Op, a: VertexId, b: VertexId) -> VertexId {
        self.gate(GateLabel::U2(op), &[a, b])
    }

    /// Set the root, drop everything it does not reach, and validate.
    pub fn finish(mut self, root: VertexId) -> Result<Circuit, InvalidCircuit> {
        self.circuit.set_root(root);
        self.circuit.collect_garbage();
        let violations = validate(&self.circuit);
        if violations.is_empty() {
            Ok(self.circuit)
        } else {
            Err(InvalidCircuit(violations))
        }
    }
}

/// Standard three-gate circuit `(x_a ∧ ¬x_b) ∨ (¬x_a ∧ x_b)` on vertices of
/// an existing builder.
pub fn xor_block(b: &mut CircuitBuilder, x: VertexId, y: VertexId) -> VertexId {
    let ny = b.not(y);
    let nx = b.not(x);
    let l = b.and(x, ny);
    let r = b.and(nx, y);
    b.or(l, r)
}

/// XOR of `x1..xn` built from chained three-gate blocks (`3(n-1)` gates).
pub fn xor_chain(n: u32) -> Circuit {
    assert!(n >= 1);
    let mut b = CircuitBuilder::demorgan(n);
    let mut acc = b.input(1);
    for i in 2..=n {
        let xi = b.input(i);
        acc = xor_block(&mut b, acc, xi);
    }
    b.finish(acc).expect("xor chain is a valid circuit")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let nx = b.not(x);
        assert_eq!(b.finish(nx).unwrap().size(), 0);

        assert_eq!(xor_chain(2).size(), 3);

        let mut b = CircuitBuilder::demorgan(3);
        let (x1, x2, x3) = (b.input(1), b.input(2), b.input(3));
        let a = b.and(x1, x2);
        let r = b.and(a, x3);
        assert_eq!(b.finish(r).unwrap().size(), 2);
    }

    #[test]
    fn builder_shares_inputs_and_collects_garbage() {
        let mut b = CircuitBuilder::demorgan(2);
        let x1 = b.input(1);
        assert_eq!(b.input(1), x1);
        let x2 = b.input(2);
        let _unused = b.and(x1, x2);
        let c = b.finish(x1).unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.read_inputs().into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn constant_detection() {
        let mut b = CircuitBuilder::demorgan(0);
        let one = b.constant(true);
        let f = b.not(one);
        assert_eq!(b.finish(f).unwrap().as_constant(), Some(false));
        let mut b = CircuitBuilder::demorgan(0);
        let one = b.constant(true);
        assert_eq!(b.finish(one).unwrap().as_constant(), Some(true));
        assert_eq!(xor_chain(2).as_constant(), None);
    }

    #[test]
    fn builder_rejects_wrong_basis() {
        let mut b = CircuitBuilder::u2(2);
        let x = b.input(1);
        let y = b.input(2);
        let g = b.and(x, y);
        assert!(b.finish(g).is_err());
    }
}
