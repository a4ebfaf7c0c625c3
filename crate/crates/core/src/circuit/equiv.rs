use std::collections::HashMap;

use super::eval::{topo_order, CircuitError};
use super::{Basis, Circuit, GateLabel, VertexId};
use crate::formula::Term;

/// Maximum number of term nodes [`unroll_term`] will build.
pub const UNROLL_BUDGET: usize = 1 << 20;

/// The term a DeMorgan circuit represents; shared subcircuits are copied.
pub fn unroll_term(c: &Circuit) -> Result<Term, CircuitError> {
    if c.basis() != Basis::DeMorgan {
        return Err(CircuitError::WrongBasis(c.basis()));
    }
    let order = topo_order(c)?;
    let mut sizes: HashMap<VertexId, usize> = HashMap::new();
    for id in &order {
        let e = c.edge(*id).expect("ordered edge exists");
        let s = e.args().iter().fold(1usize, |acc, v| acc.saturating_add(sizes[v]));
        sizes.insert(e.result(), s);
    }
    let root_size = *sizes.get(&c.root()).ok_or(CircuitError::Dangling(c.root()))?;
    if root_size > UNROLL_BUDGET {
        return Err(CircuitError::UnrollBudget { budget: UNROLL_BUDGET });
    }
    let mut terms: HashMap<VertexId, Term> = HashMap::new();
    for id in order {
        let e = c.edge(id).expect("ordered edge exists");
        let arg = |k: usize| terms[&e.args()[k]].clone();
        let t = match e.label {
            GateLabel::Input(i) => Term::input(i),
            GateLabel::Const0 => Term::Zero,
            GateLabel::Const1 => Term::One,
            GateLabel::Not => Term::not(arg(0)),
            GateLabel::And => Term::and(arg(0), arg(1)),
            GateLabel::Or => Term::or(arg(0), arg(1)),
            GateLabel::U2(_) => unreachable!("basis checked above"),
        };
        terms.insert(e.result(), t);
    }
    Ok(terms.remove(&c.root()).expect("root was sized"))
}

fn bisimilar_at(
    c1: &Circuit,
    p1: &HashMap<VertexId, super::EdgeId>,
    v1: VertexId,
    c2: &Circuit,
    p2: &HashMap<VertexId, super::EdgeId>,
    v2: VertexId,
    memo: &mut HashMap<(VertexId, VertexId), bool>,
) -> bool {
    if let Some(r) = memo.get(&(v1, v2)) {
        return *r;
    }
    let result = match (p1.get(&v1), p2.get(&v2)) {
        (Some(e1), Some(e2)) => {
            let (e1, e2) = (c1.edge(*e1).unwrap(), c2.edge(*e2).unwrap());
            e1.label == e2.label
                && e1.args().len() == e2.args().len()
                && e1
                    .args()
                    .iter()
                    .zip(e2.args())
                    .all(|(a, b)| bisimilar_at(c1, p1, *a, c2, p2, *b, memo))
        }
        _ => false,
    };
    memo.insert((v1, v2), result);
    result
}

/// Equal tree unrollings, decided on the graphs with memoized vertex pairs.
pub fn bisimilar(c1: &Circuit, c2: &Circuit) -> bool {
    if c1.basis() != c2.basis() {
        return false;
    }
    let (p1, p2) = (c1.producers(), c2.producers());
    bisimilar_at(c1, &p1, c1.root(), c2, &p2, c2.root(), &mut HashMap::new())
}

/// Partition of a circuit's vertices into bisimilarity classes, by
/// hash-consing `(label, argument classes)` in topological order.
#[derive(Clone, Debug)]
pub struct VertexClasses {
    class: HashMap<VertexId, u32>,
}

impl VertexClasses {
    pub fn of(c: &Circuit) -> Result<VertexClasses, CircuitError> {
        let mut table: HashMap<(GateLabel, Vec<u32>), u32> = HashMap::new();
        let mut class = HashMap::new();
        for id in topo_order(c)? {
            let e = c.edge(id).expect("ordered edge exists");
            let key = (e.label, e.args().iter().map(|v| class[v]).collect::<Vec<u32>>());
            let next = table.len() as u32;
            let k = *table.entry(key).or_insert(next);
            class.insert(e.result(), k);
        }
        Ok(VertexClasses { class })
    }

    pub fn class(&self, v: VertexId) -> Option<u32> {
        self.class.get(&v).copied()
    }

    pub fn same(&self, a: VertexId, b: VertexId) -> bool {
        a == b || matches!((self.class(a), self.class(b)), (Some(x), Some(y)) if x == y)
    }
}

/// A root-preserving bijection on vertices and edges that preserves labels
/// and attachments.
///
/// In a rooted term graph the producer of every vertex is unique, so the
/// mapping is forced once the roots are paired; a single traversal either
/// builds it or finds a clash.
pub fn isomorphic(c1: &Circuit, c2: &Circuit) -> bool {
    if c1.basis() != c2.basis() || c1.edge_count() != c2.edge_count() {
        return false;
    }
    if c1.vertices().count() != c2.vertices().count() {
        return false;
    }
    let (p1, p2) = (c1.producers(), c2.producers());
    let mut fwd: HashMap<VertexId, VertexId> = HashMap::new();
    let mut bwd: HashMap<VertexId, VertexId> = HashMap::new();
    let mut stack = vec![(c1.root(), c2.root())];
    while let Some((v1, v2)) = stack.pop() {
        match (fwd.get(&v1), bwd.get(&v2)) {
            (Some(w2), Some(w1)) if *w2 == v2 && *w1 == v1 => continue,
            (None, None) => {}
            _ => return false,
        }
        fwd.insert(v1, v2);
        bwd.insert(v2, v1);
        let (Some(e1), Some(e2)) = (p1.get(&v1), p2.get(&v2)) else {
            return false;
        };
        let (e1, e2) = (c1.edge(*e1).unwrap(), c2.edge(*e2).unwrap());
        if e1.label != e2.label || e1.args().len() != e2.args().len() {
            return false;
        }
        stack.extend(e1.args().iter().copied().zip(e2.args().iter().copied()));
    }
    fwd.len() == c1.vertices().count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{xor_chain, CircuitBuilder};

    fn shared_and(shared: bool) -> Circuit {
        let mut b = CircuitBuilder::demorgan(2);
        let (x1, x2) = (b.input(1), b.input(2));
        let l = b.and(x1, x2);
        let r = if shared { l } else { b.and(x1, x2) };
        let o = b.or(l, r);
        b.finish(o).unwrap()
    }

    #[test]
    fn unrolling_duplicates_sharing() {
        let t = unroll_term(&shared_and(true)).unwrap();
        assert_eq!(t.to_string(), "(or (and x1 x2) (and x1 x2))");

        let mut b = CircuitBuilder::demorgan(3);
        let x3 = b.input(3);
        assert_eq!(unroll_term(&b.finish(x3).unwrap()).unwrap(), Term::input(3));

        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let n = b.not(x);
        let nn = b.not(n);
        assert_eq!(unroll_term(&b.finish(nn).unwrap()).unwrap().to_string(), "(not (not x1))");
    }

    #[test]
    fn unrolling_budget() {
        let mut b = CircuitBuilder::demorgan(1);
        let mut v = b.input(1);
        for _ in 0..21 {
            v = b.and(v, v);
        }
        assert_eq!(
            unroll_term(&b.finish(v).unwrap()),
            Err(CircuitError::UnrollBudget { budget: UNROLL_BUDGET })
        );
    }

    #[test]
    fn bisimilarity() {
        let c = xor_chain(3);
        assert!(bisimilar(&c, &c));
        assert!(bisimilar(&shared_and(true), &shared_and(false)));
        assert!(!isomorphic(&shared_and(true), &shared_and(false)));

        let mut b = CircuitBuilder::demorgan(2);
        let (x1, x2) = (b.input(1), b.input(2));
        let g = b.and(x1, x2);
        let xy = b.finish(g).unwrap();
        let mut b = CircuitBuilder::demorgan(2);
        let (x1, x2) = (b.input(1), b.input(2));
        let g = b.and(x2, x1);
        let yx = b.finish(g).unwrap();
        assert!(!bisimilar(&xy, &yx));
    }

    #[test]
    fn classes_merge_duplicates() {
        let c = shared_and(false);
        let classes = VertexClasses::of(&c).unwrap();
        let root = c.producer_of(c.root()).unwrap().1;
        assert!(classes.same(root.args()[0], root.args()[1]));
        assert!(!classes.same(root.args()[0], c.root()));
    }

    #[test]
    fn isomorphism() {
        let c = xor_chain(3);
        assert!(isomorphic(&c, &c.clone()));

        let mut b = CircuitBuilder::demorgan(2);
        let (x1, x2) = (b.input(1), b.input(2));
        let g = b.or(x1, x2);
        let or = b.finish(g).unwrap();
        let mut b = CircuitBuilder::demorgan(2);
        let (x1, x2) = (b.input(1), b.input(2));
        let g = b.and(x1, x2);
        let and = b.finish(g).unwrap();
        assert!(!isomorphic(&or, &and));
    }
}
