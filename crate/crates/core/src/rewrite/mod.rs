//! Graph rewriting of DeMorgan circuits with the sixteen rules.
//!
//! A rewrite step removes the edge producing the redex site `α`, glues in
//! the right-hand side with its root identified with `α`, identifies `α`
//! with the image of `γ` when the right-hand side is `γ`, and collects
//! garbage.
//!
//! Non-linear patterns (`g ∧ g`, `g ∧ ¬g`, ...) match when the two images of
//! `γ` are the same vertex or two bisimilar vertices. The first image, in
//! attachment order, is the one the right-hand side reuses.

mod pattern;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{topo_order, Basis, Circuit, CircuitError, EdgeId, GateLabel, VertexClasses, VertexId};

pub use pattern::{graph_rules, GraphRule, Pattern, PatternNode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("rewriting needs a DeMorgan circuit")]
    WrongBasis,
    #[error("stale redex: {rule} no longer matches at {site}")]
    StaleRedex { rule: &'static str, site: VertexId },
    #[error("input x{0} is not read by the circuit")]
    MissingInput(u32),
    #[error("normalization exceeded its step budget of {budget}")]
    StepBudgetExceeded { budget: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// A rule occurrence: the left-hand side of `rule` matches the subcircuit
/// rooted at `site`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub site: VertexId,
    /// Index into [`graph_rules`].
    pub rule: usize,
    pub name: &'static str,
    /// Image of each pattern node: the matched edge for gate nodes.
    pub edges: Vec<Option<EdgeId>>,
    /// Image of `γ`, if the pattern has one.
    pub gamma: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub rule: &'static str,
    pub site: VertexId,
    pub edges_removed: Vec<EdgeId>,
    pub edges_added: Vec<EdgeId>,
    pub size_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Always the first redex in (site topological position, rule) order.
    Deterministic,
    /// A uniform choice among all redexes, from a ChaCha8 stream.
    SeededRandom(u64),
}

struct Matcher<'a> {
    circuit: &'a Circuit,
    producers: &'a HashMap<VertexId, EdgeId>,
    classes: &'a VertexClasses,
}

impl Matcher<'_> {
    fn match_at(&self, rule: &GraphRule, site: VertexId) -> Option<(Vec<Option<EdgeId>>, Option<VertexId>)> {
        let mut edges = vec![None; rule.lhs.nodes.len()];
        let mut gamma = None;
        self.node(&rule.lhs, rule.lhs.root, site, &mut edges, &mut gamma).then_some((edges, gamma))
    }

    fn node(
        &self,
        pat: &Pattern,
        k: usize,
        v: VertexId,
        edges: &mut [Option<EdgeId>],
        gamma: &mut Option<VertexId>,
    ) -> bool {
        match &pat.nodes[k] {
            PatternNode::Open => match gamma {
                Some(u) => self.classes.same(*u, v),
                None => {
                    *gamma = Some(v);
                    true
                }
            },
            PatternNode::Gate(label, args) => {
                let Some(&id) = self.producers.get(&v) else { return false };
                let e = self.circuit.edge(id).expect("producer exists");
                if e.label != *label {
                    return false;
                }
                edges[k] = Some(id);
                args.iter()
                    .zip(e.args())
                    .all(|(a, w)| self.node(pat, *a, *w, edges, gamma))
            }
        }
    }
}

fn demorgan_only(c: &Circuit) -> Result<(), RewriteError> {
    if c.basis() == Basis::DeMorgan {
        Ok(())
    } else {
        Err(RewriteError::WrongBasis)
    }
}

/// Every redex of `c`, ordered by the topological position of the site's
/// edge and then by rule order.
pub fn find_redexes(c: &Circuit) -> Result<Vec<Redex>, RewriteError> {
    demorgan_only(c)?;
    let rules = graph_rules();
    let producers = c.producers();
    let classes = VertexClasses::of(c)?;
    let m = Matcher { circuit: c, producers: &producers, classes: &classes };
    let mut out = Vec::new();
    for id in topo_order(c)? {
        let site = c.edge(id).expect("ordered edge exists").result();
        for (k, rule) in rules.iter().enumerate() {
            if let Some((edges, gamma)) = m.match_at(rule, site) {
                out.push(Redex { site, rule: k, name: rule.name, edges, gamma });
            }
        }
    }
    Ok(out)
}

/// One proper rewrite step.
pub fn apply_rewrite(c: &Circuit, r: &Redex) -> Result<(Circuit, TraceRecord), RewriteError> {
    demorgan_only(c)?;
    let rules = graph_rules();
    let rule = rules.get(r.rule).ok_or_else(|| RewriteError::Internal(format!("no rule {}", r.rule)))?;
    let producers = c.producers();
    let classes = VertexClasses::of(c)?;
    let m = Matcher { circuit: c, producers: &producers, classes: &classes };
    let stale = || RewriteError::StaleRedex { rule: rule.name, site: r.site };
    let (edges, gamma) = m.match_at(rule, r.site).ok_or_else(stale)?;
    if edges != r.edges || gamma != r.gamma {
        return Err(stale());
    }

    let mut out = c.clone();
    let alpha = r.site;
    let root_edge = producers[&alpha];
    out.remove_edge(root_edge);
    let mut added = Vec::new();

    if rule.rhs.is_open() {
        let g = gamma.ok_or_else(|| RewriteError::Internal(format!("{} has no image for γ", rule.name)))?;
        out.merge_vertex(alpha, g);
    } else if rule.rhs.mentions_open() {
        return Err(RewriteError::Internal(format!(
            "{}: right-hand side uses γ below its root",
            rule.name
        )));
    } else {
        let mut image: Vec<Option<VertexId>> = vec![None; rule.rhs.nodes.len()];
        image[rule.rhs.root] = Some(alpha);
        // Pattern nodes are listed children first.
        for (k, node) in rule.rhs.nodes.iter().enumerate() {
            let PatternNode::Gate(label, args) = node else { unreachable!("checked above") };
            let result = match image[k] {
                Some(v) => v,
                None => out.fresh_vertex(),
            };
            image[k] = Some(result);
            let mut att = vec![result];
            att.extend(args.iter().map(|a| image[*a].expect("children precede parents")));
            added.push(out.add_edge(*label, att));
        }
    }

    let mut removed = vec![root_edge];
    removed.extend(out.collect_garbage());
    removed.sort();
    added.retain(|id| out.contains_edge(*id));
    let record = TraceRecord {
        step: 0,
        rule: rule.name,
        site: alpha,
        edges_removed: removed,
        edges_added: added,
        size_after: out.size(),
    };
    Ok((out, record))
}

/// Relabel the edge of `x_i` as the constant `b`. Nothing else changes.
pub fn substitute_input(c: &Circuit, i: u32, b: bool) -> Result<Circuit, RewriteError> {
    demorgan_only(c)?;
    let id = c.input_edge(i).ok_or(RewriteError::MissingInput(i))?;
    let mut out = c.clone();
    out.edge_mut(id).expect("input edge").label = if b { GateLabel::Const1 } else { GateLabel::Const0 };
    Ok(out)
}

fn label_weight(l: GateLabel) -> usize {
    match l {
        GateLabel::Const0 => 5,
        GateLabel::And | GateLabel::Or => 4,
        GateLabel::Const1 => 2,
        GateLabel::Not | GateLabel::Input(_) => 1,
        GateLabel::U2(_) => 4,
    }
}

/// Termination measure: strictly decreases on every rewrite step.
pub fn graph_measure(c: &Circuit) -> usize {
    c.edges().map(|(_, e)| label_weight(e.label)).sum()
}

/// Rewrite until no redex remains.
pub fn normalize_circuit(c: &Circuit, strategy: Strategy) -> Result<(Circuit, Vec<TraceRecord>), RewriteError> {
    demorgan_only(c)?;
    let mut cur = c.clone();
    cur.collect_garbage();
    let budget = graph_measure(&cur) + 1;
    let mut rng = match strategy {
        Strategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Deterministic => None,
    };
    let mut trace = Vec::new();
    loop {
        let redexes = find_redexes(&cur)?;
        let chosen = match rng.as_mut() {
            Some(rng) => redexes.choose(rng),
            None => redexes.first(),
        };
        let Some(r) = chosen else { break };
        if trace.len() >= budget {
            return Err(RewriteError::StepBudgetExceeded { budget });
        }
        let (next, mut record) = apply_rewrite(&cur, r)?;
        record.step = trace.len() + 1;
        trace.push(record);
        cur = next;
    }
    Ok((cur, trace))
}

/// Ways in which `c` fails the normal-form shape: double negations,
/// binary gates over equal (or bisimilar) arguments, and constants inside a
/// non-constant circuit.
pub fn normal_form_violations(c: &Circuit) -> Result<Vec<String>, RewriteError> {
    let classes = VertexClasses::of(c)?;
    let producers = c.producers();
    let constant = c.as_constant().is_some();
    let mut out = Vec::new();
    for (id, e) in c.edges() {
        match e.label {
            GateLabel::Not => {
                let inner = c.edge(producers[&e.args()[0]]).expect("producer");
                if inner.label == GateLabel::Not {
                    out.push(format!("double negation at {id}"));
                }
            }
            GateLabel::Const0 => out.push(format!("CONST0 edge {id}")),
            GateLabel::Const1 if !constant => out.push(format!("constant edge {id} in a non-constant circuit")),
            l if l.is_binary() && classes.same(e.args()[0], e.args()[1]) => {
                out.push(format!("{id} has equal arguments"))
            }
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{truth_table, CircuitBuilder};

    fn only_redex_names(c: &Circuit) -> Vec<&'static str> {
        find_redexes(c).unwrap().into_iter().map(|r| r.name).collect()
    }

    #[test]
    fn dedup_and_fixing_redexes() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let g = b.and(x, x);
        assert_eq!(only_redex_names(&b.finish(g).unwrap()), vec!["and-dedup"]);

        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let one = b.constant(true);
        let g = b.or(x, one);
        assert_eq!(only_redex_names(&b.finish(g).unwrap()), vec!["or-fixing-right"]);

        let mut b = CircuitBuilder::demorgan(2);
        let (x, y) = (b.input(1), b.input(2));
        let g = b.and(x, y);
        assert!(only_redex_names(&b.finish(g).unwrap()).is_empty());
    }

    #[test]
    fn passing_collects_the_constant() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let one = b.constant(true);
        let g = b.and(x, one);
        let c = b.finish(g).unwrap();
        let r = &find_redexes(&c).unwrap()[0];
        let (out, rec) = apply_rewrite(&c, r).unwrap();
        assert_eq!(out.edge_count(), 1);
        assert_eq!(out.producer_of(out.root()).unwrap().1.label, GateLabel::Input(1));
        assert_eq!(rec.edges_removed.len(), 2);
        assert!(rec.edges_added.is_empty());
    }

    #[test]
    fn tautology_yields_falsum() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let nx = b.not(x);
        let g = b.and(x, nx);
        let c = b.finish(g).unwrap();
        let (out, trace) = normalize_circuit(&c, Strategy::Deterministic).unwrap();
        assert_eq!(out.as_constant(), Some(false));
        assert_eq!(out.edge_count(), 2);
        assert_eq!(trace[0].rule, "and-tautology-right");
    }

    #[test]
    fn zero_elim_keeps_the_size() {
        let mut b = CircuitBuilder::demorgan(0);
        let z = b.constant(false);
        let c = b.finish(z).unwrap();
        assert_eq!(graph_measure(&c), 5);
        let r = &find_redexes(&c).unwrap()[0];
        let (out, rec) = apply_rewrite(&c, r).unwrap();
        assert_eq!(out.as_constant(), Some(false));
        assert_eq!(out.root(), c.root());
        assert_eq!(graph_measure(&out), 3);
        assert_eq!(rec.size_after, 0);
    }

    #[test]
    fn stale_redex_is_rejected() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let nx = b.not(x);
        let nnx = b.not(nx);
        let c = b.finish(nnx).unwrap();
        let r = find_redexes(&c).unwrap().remove(0);
        let (out, _) = apply_rewrite(&c, &r).unwrap();
        assert!(matches!(apply_rewrite(&out, &r), Err(RewriteError::StaleRedex { .. })));
        assert_eq!(out.edge_count(), 1);
    }

    #[test]
    fn substitution_then_normalization() {
        let mut b = CircuitBuilder::demorgan(2);
        let (x, y) = (b.input(1), b.input(2));
        let g = b.and(x, y);
        let c = b.finish(g).unwrap();
        let s = substitute_input(&c, 2, true).unwrap();
        assert_eq!(s.edge_count(), 3);
        assert!(s.edges().any(|(_, e)| e.label == GateLabel::Const1));
        let s = substitute_input(&c, 2, false).unwrap();
        let (n, _) = normalize_circuit(&s, Strategy::Deterministic).unwrap();
        assert_eq!(n.as_constant(), Some(false));
        assert!(n.read_inputs().is_empty());
        assert!(matches!(substitute_input(&n, 1, true), Err(RewriteError::MissingInput(1))));

        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let c = substitute_input(&b.finish(x).unwrap(), 1, false).unwrap();
        assert_eq!(c.producer_of(c.root()).unwrap().1.label, GateLabel::Const0);
    }

    #[test]
    fn normalization_examples() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let one = b.constant(true);
        let a = b.and(x, one);
        let z = b.constant(false);
        let o = b.or(a, z);
        let c = b.finish(o).unwrap();
        let (n, trace) = normalize_circuit(&c, Strategy::Deterministic).unwrap();
        assert_eq!(n.edge_count(), 1);
        assert_eq!(truth_table(&n).unwrap(), truth_table(&c).unwrap());
        assert!(trace.windows(2).all(|w| w[0].step + 1 == w[1].step));

        let (again, trace) = normalize_circuit(&n, Strategy::Deterministic).unwrap();
        assert_eq!(again, n);
        assert!(trace.is_empty());
    }

    #[test]
    fn bisimilar_duplicates_count_as_equal() {
        let mut b = CircuitBuilder::demorgan(1);
        let x = b.input(1);
        let n1 = b.not(x);
        let n2 = b.not(x);
        let g = b.and(n1, n2);
        let c = b.finish(g).unwrap();
        assert_eq!(only_redex_names(&c), vec!["and-dedup"]);
        let (n, _) = normalize_circuit(&c, Strategy::Deterministic).unwrap();
        assert_eq!(n.size(), 0);
        assert!(normal_form_violations(&n).unwrap().is_empty());
    }
}
