use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Basis, Circuit, EdgeId, GateLabel, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("cycle detected through {0}")]
    Cycle(VertexId),
    #[error("vertex {0} has no producing edge")]
    Dangling(VertexId),
    #[error("assignment has {found} bits but the circuit declares {expected} inputs")]
    AssignmentLength { expected: u32, found: usize },
    #[error("assignment must be a string of 0 and 1, got {0:?}")]
    BadAssignment(String),
    #[error("unrolling exceeds the budget of {budget} term nodes")]
    UnrollBudget { budget: usize },
    #[error("operation needs a DeMorgan circuit, got basis {0}")]
    WrongBasis(Basis),
    #[error("truth tables are limited to {limit} inputs, circuit declares {found}")]
    TooManyInputs { limit: u32, found: u32 },
}

/// Values for `x1..xn`, `x1` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    /// Row `r` of an `n`-input truth table: `x_i` is bit `i - 1` of `r`.
    pub fn from_index(n: u32, r: u64) -> Assignment {
        Assignment((0..n).map(|i| (r >> i) & 1 == 1).collect())
    }

    pub fn index(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, b)| u64::from(*b) << i).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of `x_i`, `i >= 1`.
    pub fn get(&self, i: u32) -> bool {
        self.0[i as usize - 1]
    }

    /// The same assignment with `x_i` flipped.
    pub fn flipped(&self, i: u32) -> Assignment {
        let mut bits = self.0.clone();
        bits[i as usize - 1] ^= true;
        Assignment(bits)
    }

    pub fn parity(&self) -> bool {
        self.0.iter().filter(|b| **b).count() % 2 == 1
    }

    pub fn all(n: u32) -> impl Iterator<Item = Assignment> {
        (0..1u64 << n).map(move |r| Assignment::from_index(n, r))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl serde::Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Assignment {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CircuitError::BadAssignment(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

/// XOR of all bits.
pub fn parity(a: &Assignment) -> bool {
    a.parity()
}

/// Edges in dependency order; among ready edges the smallest id goes first.
pub fn topo_order(c: &Circuit) -> Result<Vec<EdgeId>, CircuitError> {
    let producers = c.producers();
    let mut pending: HashMap<EdgeId, usize> = HashMap::new();
    let mut dependents: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    let mut ready = BTreeSet::new();
    for (id, e) in c.edges() {
        let mut deps = 0;
        for v in e.args() {
            let Some(p) = producers.get(v) else {
                return Err(CircuitError::Dangling(*v));
            };
            deps += 1;
            dependents.entry(*p).or_default().push(id);
        }
        pending.insert(id, deps);
        if deps == 0 {
            ready.insert(id);
        }
    }
    let mut order = Vec::with_capacity(c.edge_count());
    while let Some(id) = ready.pop_first() {
        order.push(id);
        for d in dependents.get(&id).into_iter().flatten() {
            let n = pending.get_mut(d).expect("known edge");
            *n -= 1;
            if *n == 0 {
                ready.insert(*d);
            }
        }
    }
    if order.len() < c.edge_count() {
        let stuck = c
            .edges()
            .find(|(id, _)| pending[id] > 0)
            .map(|(_, e)| e.result())
            .expect("some edge is stuck");
        return Err(CircuitError::Cycle(stuck));
    }
    Ok(order)
}

fn gate<T: Copy>(label: GateLabel, args: &[T], input: impl Fn(u32) -> T, ops: &Ops<T>) -> T {
    match label {
        GateLabel::Input(i) => input(i),
        GateLabel::Const0 => ops.zero,
        GateLabel::Const1 => ops.one,
        GateLabel::Not => (ops.not)(args[0]),
        GateLabel::And => (ops.and)(args[0], args[1]),
        GateLabel::Or => (ops.or)(args[0], args[1]),
        GateLabel::U2(op) => (ops.u2)(op.truth_table(), args[0], args[1]),
    }
}

struct Ops<T> {
    zero: T,
    one: T,
    not: fn(T) -> T,
    and: fn(T, T) -> T,
    or: fn(T, T) -> T,
    u2: fn([bool; 4], T, T) -> T,
}

fn run<T: Copy>(c: &Circuit, input: impl Fn(u32) -> T, ops: &Ops<T>) -> Result<T, CircuitError> {
    let mut values: HashMap<VertexId, T> = HashMap::new();
    let mut args = Vec::with_capacity(2);
    for id in topo_order(c)? {
        let e = c.edge(id).expect("ordered edge exists");
        args.clear();
        args.extend(e.args().iter().map(|v| values[v]));
        let value = gate(e.label, &args, &input, ops);
        values.insert(e.result(), value);
    }
    values.get(&c.root()).copied().ok_or(CircuitError::Dangling(c.root()))
}

/// Output bit of `c` on `a`.
pub fn evaluate(c: &Circuit, a: &Assignment) -> Result<bool, CircuitError> {
    if a.len() != c.num_inputs() as usize {
        return Err(CircuitError::AssignmentLength { expected: c.num_inputs(), found: a.len() });
    }
    let ops = Ops {
        zero: false,
        one: true,
        not: |a: bool| !a,
        and: |a, b| a & b,
        or: |a, b| a | b,
        u2: |t, p, q| {
            let row = match (p, q) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            t[row]
        },
    };
    run(c, |i| a.get(i), &ops)
}

/// Output column over all `2^n` assignments, row `r` as in
/// [`Assignment::from_index`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    pub num_inputs: u32,
    pub rows: Vec<bool>,
}

impl TruthTable {
    pub const MAX_INPUTS: u32 = 20;

    pub fn from_fn(n: u32, f: impl Fn(&Assignment) -> bool) -> TruthTable {
        TruthTable { num_inputs: n, rows: Assignment::all(n).map(|a| f(&a)).collect() }
    }

    pub fn parity(n: u32) -> TruthTable {
        Self::from_fn(n, Assignment::parity)
    }

    pub fn complement(&self) -> TruthTable {
        TruthTable { num_inputs: self.num_inputs, rows: self.rows.iter().map(|b| !b).collect() }
    }

    pub fn is_constant(&self) -> Option<bool> {
        let first = *self.rows.first()?;
        self.rows.iter().all(|b| *b == first).then_some(first)
    }
}

/// Truth table of `c`, computed 64 rows at a time.
pub fn truth_table(c: &Circuit) -> Result<TruthTable, CircuitError> {
    let n = c.num_inputs();
    if n > TruthTable::MAX_INPUTS {
        return Err(CircuitError::TooManyInputs { limit: TruthTable::MAX_INPUTS, found: n });
    }
    let rows = 1usize << n;
    let mut out = Vec::with_capacity(rows);
    for block in 0..rows.div_ceil(64) {
        let base = (block * 64) as u64;
        let input = |i: u32| -> u64 {
            let mut w = 0u64;
            for r in 0..64u64 {
                if (base + r) >> (i - 1) & 1 == 1 {
                    w |= 1 << r;
                }
            }
            w
        };
        let ops = Ops {
            zero: 0u64,
            one: !0u64,
            not: |a: u64| !a,
            and: |a, b| a & b,
            or: |a, b| a | b,
            u2: |t, p, q| {
                let mut w = 0;
                for (row, (mp, mq)) in [(p, q), (p, !q), (!p, q), (!p, !q)].into_iter().enumerate() {
                    if t[row] {
                        w |= mp & mq;
                    }
                }
                w
            },
        };
        let w = run(c, input, &ops)?;
        for r in 0..64.min(rows - block * 64) {
            out.push(w >> r & 1 == 1);
        }
    }
    Ok(TruthTable { num_inputs: n, rows: out })
}
