//! The sixteen graph rules, written out by hand.
//!
//! A pattern is a small tree of gate nodes over at most one open vertex `γ`,
//! which may be referenced twice. Node indices are local to the pattern;
//! every node except `γ` stands for one edge.

use crate::circuit::GateLabel;
use crate::formula::{RuleFamily, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternNode {
    /// The open vertex `γ`.
    Open,
    Gate(GateLabel, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub nodes: Vec<PatternNode>,
    pub root: usize,
}

impl Pattern {
    /// The pattern is exactly `γ`.
    pub fn is_open(&self) -> bool {
        self.nodes[self.root] == PatternNode::Open
    }

    pub fn mentions_open(&self) -> bool {
        self.nodes.contains(&PatternNode::Open)
    }

    /// Term with `γ` read as the variable `g`.
    pub fn to_term(&self) -> Term {
        self.term_at(self.root)
    }

    fn term_at(&self, k: usize) -> Term {
        match &self.nodes[k] {
            PatternNode::Open => Term::var("g"),
            PatternNode::Gate(label, args) => {
                let a = |i: usize| self.term_at(args[i]);
                match label {
                    GateLabel::Const0 => Term::Zero,
                    GateLabel::Const1 => Term::One,
                    GateLabel::Not => Term::not(a(0)),
                    GateLabel::And => Term::and(a(0), a(1)),
                    GateLabel::Or => Term::or(a(0), a(1)),
                    other => unreachable!("no pattern uses {other}"),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphRule {
    pub name: &'static str,
    pub family: RuleFamily,
    pub lhs: Pattern,
    pub rhs: Pattern,
}

// Shorthand for building patterns. `G` is the open vertex when present.
const G: usize = 0;

fn p(nodes: Vec<PatternNode>) -> Pattern {
    let root = nodes.len() - 1;
    Pattern { nodes, root }
}

fn open() -> PatternNode {
    PatternNode::Open
}

fn leaf(l: GateLabel) -> PatternNode {
    PatternNode::Gate(l, vec![])
}

fn not(a: usize) -> PatternNode {
    PatternNode::Gate(GateLabel::Not, vec![a])
}

fn bin(l: GateLabel, a: usize, b: usize) -> PatternNode {
    PatternNode::Gate(l, vec![a, b])
}

fn one() -> Pattern {
    p(vec![leaf(GateLabel::Const1)])
}

fn falsum() -> Pattern {
    p(vec![leaf(GateLabel::Const1), not(0)])
}

fn gamma() -> Pattern {
    p(vec![open()])
}

fn rule(name: &'static str, family: RuleFamily, lhs: Pattern, rhs: Pattern) -> GraphRule {
    GraphRule { name, family, lhs, rhs }
}

/// The rules in the same order as the term system.
pub fn graph_rules() -> Vec<GraphRule> {
    use GateLabel::{And, Const0, Const1, Or};
    use RuleFamily::*;
    vec![
        rule("zero-elim", Normalizing, p(vec![leaf(Const0)]), falsum()),
        rule("double-negation-elim", Normalizing, p(vec![open(), not(G), not(1)]), gamma()),
        rule("and-dedup", Normalizing, p(vec![open(), bin(And, G, G)]), gamma()),
        rule("or-dedup", Normalizing, p(vec![open(), bin(Or, G, G)]), gamma()),
        rule("and-fixing-right", Fixing, p(vec![open(), leaf(Const1), not(1), bin(And, G, 2)]), falsum()),
        rule("and-fixing-left", Fixing, p(vec![open(), leaf(Const1), not(1), bin(And, 2, G)]), falsum()),
        rule("or-fixing-right", Fixing, p(vec![open(), leaf(Const1), bin(Or, G, 1)]), one()),
        rule("or-fixing-left", Fixing, p(vec![open(), leaf(Const1), bin(Or, 1, G)]), one()),
        rule("and-passing-right", Passing, p(vec![open(), leaf(Const1), bin(And, G, 1)]), gamma()),
        rule("and-passing-left", Passing, p(vec![open(), leaf(Const1), bin(And, 1, G)]), gamma()),
        rule("or-passing-right", Passing, p(vec![open(), leaf(Const1), not(1), bin(Or, G, 2)]), gamma()),
        rule("or-passing-left", Passing, p(vec![open(), leaf(Const1), not(1), bin(Or, 2, G)]), gamma()),
        rule("and-tautology-right", Tautology, p(vec![open(), not(G), bin(And, G, 1)]), falsum()),
        rule("and-tautology-left", Tautology, p(vec![open(), not(G), bin(And, 1, G)]), falsum()),
        rule("or-tautology-right", Tautology, p(vec![open(), not(G), bin(Or, G, 1)]), one()),
        rule("or-tautology-left", Tautology, p(vec![open(), not(G), bin(Or, 1, G)]), one()),
    ]
}
