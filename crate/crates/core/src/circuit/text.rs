//! Line-oriented circuit text format.
//!
//! ```text
//! ckt 1
//! basis demorgan          # or: basis u2
//! inputs 3                # declares x1..x3
//! n1 = AND x1 x2
//! n2 = NOT n1
//! n3 = OR n2 x3
//! output n3
//! ```
//!
//! Gate operators are `AND`, `OR`, `NOT`, `CONST0`, `CONST1` and `U2_k` for
//! `1 <= k <= 14`. Names match `[a-z][a-z0-9_]*`; `x<digits>` is reserved for
//! inputs. Operands must be defined on an earlier line, which also rules out
//! cycles. Gates the output does not depend on are dropped.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::{Basis, Circuit, CircuitBuilder, EdgeId, GateLabel, VertexId};
use crate::basis::u2::U2Op;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseCircuitError {
    pub line: usize,
    pub kind: ErrorKind,
    pub message: String,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseCircuitError {
    ParseCircuitError { line, kind: ErrorKind::Syntax, message: message.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseCircuitError {
    ParseCircuitError { line, kind: ErrorKind::Semantic, message: message.into() }
}

fn input_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z'))
        && bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

fn parse_op(token: &str, line: usize) -> Result<GateLabel, ParseCircuitError> {
    Ok(match token {
        "AND" => GateLabel::And,
        "OR" => GateLabel::Or,
        "NOT" => GateLabel::Not,
        "CONST0" => GateLabel::Const0,
        "CONST1" => GateLabel::Const1,
        _ => {
            let k = token
                .strip_prefix("U2_")
                .and_then(|k| k.parse::<u8>().ok())
                .ok_or_else(|| syntax(line, format!("unknown operator {token:?}")))?;
            GateLabel::U2(U2Op::new(k).map_err(|e| syntax(line, e.to_string()))?)
        }
    })
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
    last_line: usize,
) -> Result<(usize, &'a str), ParseCircuitError> {
    let (n, text) = lines
        .next()
        .ok_or_else(|| syntax(last_line, format!("missing `{keyword}` line")))?;
    let mut words = text.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some(k), Some(v), None) if k == keyword => Ok((n, v)),
        _ => Err(syntax(n, format!("expected `{keyword} <value>`, got {text:?}"))),
    }
}

/// Parse and validate a circuit.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseCircuitError> {
    let last_line = text.lines().count().max(1);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, version) = header(&mut lines, "ckt", last_line)?;
    if version != "1" {
        return Err(syntax(n, format!("unsupported format version {version:?}")));
    }
    let (n, basis) = header(&mut lines, "basis", last_line)?;
    let basis = match basis {
        "demorgan" => Basis::DeMorgan,
        "u2" => Basis::U2,
        other => return Err(syntax(n, format!("unknown basis {other:?}"))),
    };
    let (n, inputs) = header(&mut lines, "inputs", last_line)?;
    let num_inputs: u32 = inputs
        .parse()
        .map_err(|_| syntax(n, format!("input count must be a non-negative integer, got {inputs:?}")))?;

    let mut b = CircuitBuilder::new(basis, num_inputs);
    let mut names: HashMap<&str, VertexId> = HashMap::new();
    let mut output = None;

    for (n, text) in lines {
        if output.is_some() {
            return Err(syntax(n, "nothing may follow the `output` line"));
        }
        let resolve = |b: &mut CircuitBuilder, name: &str| -> Result<VertexId, ParseCircuitError> {
            if let Some(i) = input_index(name) {
                if i == 0 || i > num_inputs {
                    return Err(semantic(n, format!("input {name} is not declared (inputs {num_inputs})")));
                }
                return Ok(b.input(i));
            }
            names.get(name).copied().ok_or_else(|| semantic(n, format!("undefined operand {name:?}")))
        };

        let words: Vec<&str> = text.split_whitespace().collect();
        if words[0] == "output" {
            if words.len() != 2 {
                return Err(syntax(n, "expected `output <name>`"));
            }
            output = Some(resolve(&mut b, words[1])?);
            continue;
        }
        if words.len() < 3 || words[1] != "=" {
            return Err(syntax(n, format!("expected `<name> = <OP> <args>`, got {text:?}")));
        }
        let name = words[0];
        if !is_identifier(name) {
            return Err(syntax(n, format!("invalid gate name {name:?}")));
        }
        if input_index(name).is_some() {
            return Err(semantic(n, format!("gate name {name:?} is reserved for an input")));
        }
        if names.contains_key(name) {
            return Err(semantic(n, format!("duplicate name {name:?}")));
        }
        let label = parse_op(words[2], n)?;
        if !label.allowed_in(basis) {
            return Err(semantic(n, format!("operator {} is not allowed in basis {basis}", words[2])));
        }
        let operands = &words[3..];
        if operands.len() != label.arity() {
            return Err(semantic(
                n,
                format!("{} takes {} operands, got {}", words[2], label.arity(), operands.len()),
            ));
        }
        let mut args = Vec::with_capacity(2);
        for op in operands {
            args.push(resolve(&mut b, op)?);
        }
        let v = b.gate(label, &args);
        names.insert(name, v);
    }

    let root = output.ok_or_else(|| semantic(last_line, "missing `output` line"))?;
    b.finish(root).map_err(|e| semantic(last_line, e.to_string()))
}

/// Edges reachable from the root in depth-first post-order, arguments left
/// to right. Isomorphic circuits produce corresponding sequences.
pub fn canonical_order(c: &Circuit) -> Vec<EdgeId> {
    let producers = c.producers();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(c.root(), false)];
    while let Some((v, expanded)) = stack.pop() {
        let Some(&id) = producers.get(&v) else { continue };
        if expanded {
            out.push(id);
            continue;
        }
        if !seen.insert(v) {
            continue;
        }
        stack.push((v, true));
        for a in c.edge(id).unwrap().args().iter().rev() {
            if !seen.contains(a) {
                stack.push((*a, false));
            }
        }
    }
    out
}

/// Canonical text of a valid circuit. Gates are named `n1..nk` in
/// [`canonical_order`]; inputs are referenced as `x_i` and get no line.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ckt 1");
    let _ = writeln!(s, "basis {}", c.basis());
    let _ = writeln!(s, "inputs {}", c.num_inputs());
    let mut names: HashMap<VertexId, String> = HashMap::new();
    let mut k = 0;
    for id in canonical_order(c) {
        let e = c.edge(id).unwrap();
        if let GateLabel::Input(i) = e.label {
            names.insert(e.result(), format!("x{i}"));
            continue;
        }
        k += 1;
        let name = format!("n{k}");
        let _ = write!(s, "{name} = {}", e.label);
        for a in e.args() {
            let _ = write!(s, " {}", names[a]);
        }
        s.push('\n');
        names.insert(e.result(), name);
    }
    let _ = writeln!(s, "output {}", names[&c.root()]);
    s
}
