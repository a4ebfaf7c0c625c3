use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{Circuit, EdgeId, GateLabel, VertexId};

/// One broken circuit invariant, with the offending vertex or edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    AttachmentArity { edge: EdgeId, expected: usize, found: usize },
    WrongBasis { edge: EdgeId, label: GateLabel },
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    MissingRoot { root: VertexId },
    NonUniqueResult { vertex: VertexId, edges: Vec<EdgeId> },
    NoResultEdge { vertex: VertexId },
    Unreachable { vertex: VertexId },
    Cycle { vertex: VertexId },
    DuplicateInput { index: u32, edges: Vec<EdgeId> },
    InputOutOfRange { edge: EdgeId, index: u32, declared: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |es: &[EdgeId]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Violation::AttachmentArity { edge, expected, found } => {
                write!(f, "attachment arity: {edge} has {found} attached vertices, expected {expected}")
            }
            Violation::WrongBasis { edge, label } => write!(f, "wrong basis: {edge} is labeled {label}"),
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "unknown vertex: {edge} attaches {vertex}, which is not in the vertex set")
            }
            Violation::MissingRoot { root } => write!(f, "missing root: {root} is not in the vertex set"),
            Violation::NonUniqueResult { vertex, edges } => {
                write!(f, "non-unique result edge: {vertex} is the result of {}", list(edges))
            }
            Violation::NoResultEdge { vertex } => write!(f, "no result edge: nothing produces {vertex}"),
            Violation::Unreachable { vertex } => write!(f, "unreachable: {vertex} is not reachable from the root"),
            Violation::Cycle { vertex } => write!(f, "cycle: {vertex} lies on a directed cycle"),
            Violation::DuplicateInput { index, edges } => {
                write!(f, "duplicate input: x{index} labels {}", list(edges))
            }
            Violation::InputOutOfRange { edge, index, declared } => {
                write!(f, "input out of range: {edge} reads x{index} but only {declared} inputs are declared")
            }
        }
    }
}

/// Every broken invariant of `c`; an empty list means `c` is a valid
/// circuit.
pub fn validate(c: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();
    let vertices: BTreeSet<VertexId> = c.vertices().collect();

    if !vertices.contains(&c.root()) {
        out.push(Violation::MissingRoot { root: c.root() });
    }

    let mut producers: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    let mut inputs: BTreeMap<u32, Vec<EdgeId>> = BTreeMap::new();
    let mut shape_ok = true;
    for (id, e) in c.edges() {
        let expected = 1 + e.label.arity();
        if e.att.len() != expected {
            out.push(Violation::AttachmentArity { edge: id, expected, found: e.att.len() });
            shape_ok = false;
        }
        if !e.label.allowed_in(c.basis()) {
            out.push(Violation::WrongBasis { edge: id, label: e.label });
        }
        for v in &e.att {
            if !vertices.contains(v) {
                out.push(Violation::UnknownVertex { edge: id, vertex: *v });
            }
        }
        if let GateLabel::Input(i) = e.label {
            inputs.entry(i).or_default().push(id);
            if i == 0 || i > c.num_inputs() {
                out.push(Violation::InputOutOfRange { edge: id, index: i, declared: c.num_inputs() });
            }
        }
        if let Some(r) = e.att.first() {
            producers.entry(*r).or_default().push(id);
        } else {
            shape_ok = false;
        }
    }

    for (index, edges) in inputs {
        if edges.len() > 1 {
            out.push(Violation::DuplicateInput { index, edges });
        }
    }
    for v in &vertices {
        match producers.get(v).map(Vec::len) {
            None => out.push(Violation::NoResultEdge { vertex: *v }),
            Some(1) => {}
            Some(_) => out.push(Violation::NonUniqueResult { vertex: *v, edges: producers[v].clone() }),
        }
    }
    if !shape_ok {
        return out;
    }

    // Reachability and cycles over the producer relation, using the first
    // producer of each vertex.
    let producer: HashMap<VertexId, EdgeId> = producers.iter().map(|(v, es)| (*v, es[0])).collect();
    let edges: HashMap<EdgeId, &super::Edge> = c.edges().collect();
    let mut state: HashMap<VertexId, u8> = HashMap::new(); // 1 = on stack, 2 = done
    let mut reported = BTreeSet::new();
    if vertices.contains(&c.root()) {
        let mut stack: Vec<(VertexId, usize)> = vec![(c.root(), 0)];
        state.insert(c.root(), 1);
        while let Some((v, k)) = stack.last().copied() {
            let args = producer.get(&v).map(|id| edges[id].args()).unwrap_or(&[]);
            if k < args.len() {
                stack.last_mut().unwrap().1 += 1;
                let w = args[k];
                match state.get(&w) {
                    Some(1) => {
                        if reported.insert(w) {
                            out.push(Violation::Cycle { vertex: w });
                        }
                    }
                    Some(_) => {}
                    None => {
                        state.insert(w, 1);
                        stack.push((w, 0));
                    }
                }
            } else {
                state.insert(v, 2);
                stack.pop();
            }
        }
    }
    for v in &vertices {
        if !state.contains_key(v) {
            out.push(Violation::Unreachable { vertex: *v });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Basis, Edge};

    fn edge(label: GateLabel, att: &[u32]) -> Edge {
        Edge { label, att: att.iter().map(|v| VertexId(*v)).collect() }
    }

    fn circuit(edges: Vec<Edge>, vertices: &[u32], root: u32) -> Circuit {
        Circuit::from_parts(
            Basis::DeMorgan,
            2,
            vertices.iter().map(|v| VertexId(*v)),
            edges.into_iter().enumerate().map(|(i, e)| (EdgeId(i as u32), e)),
            VertexId(root),
        )
    }

    fn messages(c: &Circuit) -> Vec<String> {
        validate(c).iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn minimal_circuit_is_valid() {
        let c = circuit(vec![edge(GateLabel::Input(1), &[0])], &[0], 0);
        assert!(validate(&c).is_empty());
    }

    #[test]
    fn short_attachment() {
        let c = circuit(
            vec![edge(GateLabel::Input(1), &[0]), edge(GateLabel::And, &[1, 0])],
            &[0, 1],
            1,
        );
        assert!(messages(&c).iter().any(|m| m.starts_with("attachment arity")));
    }

    #[test]
    fn shared_result_vertex() {
        let c = circuit(
            vec![edge(GateLabel::Input(1), &[0]), edge(GateLabel::Input(2), &[0])],
            &[0],
            0,
        );
        assert!(messages(&c).iter().any(|m| m.starts_with("non-unique result edge")));
    }

    #[test]
    fn cycles_unreachable_and_duplicates() {
        let c = circuit(
            vec![
                edge(GateLabel::Not, &[0, 1]),
                edge(GateLabel::Not, &[1, 0]),
                edge(GateLabel::Input(1), &[2]),
                edge(GateLabel::Input(1), &[3]),
            ],
            &[0, 1, 2, 3],
            0,
        );
        let m = messages(&c);
        assert!(m.iter().any(|m| m.starts_with("cycle")), "{m:?}");
        assert!(m.iter().any(|m| m.starts_with("unreachable")), "{m:?}");
        assert!(m.iter().any(|m| m.starts_with("duplicate input")), "{m:?}");
    }

    #[test]
    fn basis_mismatch_and_missing_producer() {
        let op = crate::basis::u2::U2Op::new(11).unwrap();
        let c = circuit(vec![edge(GateLabel::U2(op), &[0, 1, 1])], &[0, 1], 0);
        let m = messages(&c);
        assert!(m.iter().any(|m| m.starts_with("wrong basis")), "{m:?}");
        assert!(m.iter().any(|m| m.starts_with("no result edge")), "{m:?}");
    }
}
