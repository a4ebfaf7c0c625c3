//! The DeMorgan term rewriting system and term-level normalization.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use super::term::{apply_substitution, match_term, ParseTermError, Position, Term};

const DEMORGAN_RULES: &str = include_str!("../../data/demorgan.trs");
const IDENTITIES: &str = include_str!("../../data/identities.eqs");

/// The four rule families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleFamily {
    Normalizing,
    Fixing,
    Passing,
    Tautology,
}

impl RuleFamily {
    fn of_index(i: usize) -> RuleFamily {
        match i / 4 {
            0 => RuleFamily::Normalizing,
            1 => RuleFamily::Fixing,
            2 => RuleFamily::Passing,
            _ => RuleFamily::Tautology,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermRule {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl fmt::Display for TermRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.lhs, self.rhs)
    }
}

/// A named equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Term {
        line: usize,
        #[source]
        source: ParseTermError,
    },
    #[error("line {line}: rule `{name}` has a variable left-hand side")]
    VariableLhs { line: usize, name: String },
    #[error("line {line}: rule `{name}` introduces variables absent from its left-hand side")]
    FreshRhsVariable { line: usize, name: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("normalization exceeded its step budget of {budget}")]
    StepBudgetExceeded { budget: usize },
}

/// Split `name: body` lines, skipping blanks and comments.
fn named_lines(text: &str) -> impl Iterator<Item = (usize, Result<(&str, &str), String>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let parsed = match line.split_once(':') {
            Some((name, body)) if !name.trim().is_empty() => Ok((name.trim(), body.trim())),
            _ => Err(format!("expected `name: ...`, found `{line}`")),
        };
        Some((i + 1, parsed))
    })
}

fn split_sides<'a>(line: usize, body: &'a str, sep: &str) -> Result<(&'a str, &'a str), RuleFileError> {
    body.split_once(sep).ok_or_else(|| RuleFileError::Syntax {
        line,
        msg: format!("missing `{sep}`"),
    })
}

fn parse_side(line: usize, s: &str) -> Result<Term, RuleFileError> {
    s.trim().parse().map_err(|source| RuleFileError::Term { line, source })
}

pub fn parse_rules(text: &str) -> Result<Vec<TermRule>, RuleFileError> {
    let mut rules = Vec::new();
    for (line, parsed) in named_lines(text) {
        let (name, body) = parsed.map_err(|msg| RuleFileError::Syntax { line, msg })?;
        let (l, r) = split_sides(line, body, "->")?;
        let (lhs, rhs) = (parse_side(line, l)?, parse_side(line, r)?);
        if lhs.is_var() {
            return Err(RuleFileError::VariableLhs { line, name: name.into() });
        }
        if !rhs.variables().is_subset(&lhs.variables()) {
            return Err(RuleFileError::FreshRhsVariable { line, name: name.into() });
        }
        rules.push(TermRule { name: name.to_string(), lhs, rhs });
    }
    Ok(rules)
}

pub fn parse_identities(text: &str) -> Result<Vec<Identity>, RuleFileError> {
    let mut out = Vec::new();
    for (line, parsed) in named_lines(text) {
        let (name, body) = parsed.map_err(|msg| RuleFileError::Syntax { line, msg })?;
        let (l, r) = split_sides(line, body, "=")?;
        out.push(Identity {
            name: name.to_string(),
            lhs: parse_side(line, l)?,
            rhs: parse_side(line, r)?,
        });
    }
    Ok(out)
}

/// The source identities the rewriting system was completed from.
pub fn boolean_identities() -> Vec<Identity> {
    parse_identities(IDENTITIES).expect("bundled identity file is well-formed")
}

/// One rewrite: the rule that fired and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermStep {
    pub result: Term,
    pub position: Position,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trs {
    rules: Vec<TermRule>,
}

impl Trs {
    /// The 16-rule convergent DeMorgan system, loaded from the bundled rule file.
    pub fn demorgan() -> Trs {
        let rules = parse_rules(DEMORGAN_RULES).expect("bundled rule file is well-formed");
        Trs { rules }
    }

    pub fn from_rules(rules: Vec<TermRule>) -> Trs {
        Trs { rules }
    }

    pub fn rules(&self) -> &[TermRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&TermRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Family of the rule at `index` in the DeMorgan system's grouping.
    pub fn family(&self, index: usize) -> RuleFamily {
        RuleFamily::of_index(index)
    }

    /// Try every rule, in order, at the root of `t`.
    pub fn rewrite_at_root(&self, t: &Term) -> Option<(Term, &TermRule)> {
        self.rules.iter().find_map(|rule| {
            match_term(&rule.lhs, t).map(|sigma| (apply_substitution(&rule.rhs, &sigma), rule))
        })
    }

    /// One leftmost-innermost rewrite step, or `None` if `t` is in normal form.
    pub fn rewrite_step(&self, t: &Term) -> Option<TermStep> {
        self.step_inner(t, Position::root())
    }

    fn step_inner(&self, t: &Term, here: Position) -> Option<TermStep> {
        for (i, child) in t.children().into_iter().enumerate() {
            if let Some(step) = self.step_inner(child, here.child(i)) {
                let result = t.replace_at(&[i], step.result);
                return Some(TermStep { result, ..step });
            }
        }
        self.rewrite_at_root(t).map(|(result, rule)| TermStep {
            result,
            position: here,
            rule: rule.name.clone(),
        })
    }

    /// All redexes of `t` as `(position, rule index)`.
    pub fn redexes(&self, t: &Term) -> Vec<(Position, usize)> {
        let mut out = Vec::new();
        for pos in t.positions() {
            let sub = t.subterm(&pos).expect("position from positions()");
            for (k, rule) in self.rules.iter().enumerate() {
                if match_term(&rule.lhs, sub).is_some() {
                    out.push((pos.clone(), k));
                }
            }
        }
        out
    }

    /// Contract the redex of rule `k` at `pos`.
    pub fn contract(&self, t: &Term, pos: &Position, k: usize) -> Option<Term> {
        let rule = self.rules.get(k)?;
        let sigma = match_term(&rule.lhs, t.subterm(pos)?)?;
        Some(t.replace_at(&pos.0, apply_substitution(&rule.rhs, &sigma)))
    }

    /// Rewrite to normal form with the innermost strategy.
    ///
    /// The budget is three times the weight of the input; the weight drops by
    /// at least one per step, so hitting it means a rule is broken.
    pub fn normalize(&self, t: &Term) -> Result<Term, TermError> {
        let budget = 3 * term_weight(t);
        let mut steps = 0;
        let nf = self.normalize_inner(t, &mut steps, budget)?;
        Ok(nf)
    }

    fn normalize_inner(&self, t: &Term, steps: &mut usize, budget: usize) -> Result<Term, TermError> {
        let mut cur = match t {
            Term::Var(_) | Term::Zero | Term::One => t.clone(),
            Term::Not(a) => Term::not(self.normalize_inner(a, steps, budget)?),
            Term::And(a, b) => Term::and(
                self.normalize_inner(a, steps, budget)?,
                self.normalize_inner(b, steps, budget)?,
            ),
            Term::Or(a, b) => Term::or(
                self.normalize_inner(a, steps, budget)?,
                self.normalize_inner(b, steps, budget)?,
            ),
        };
        // Children are normal; only the root can be a redex. Its contractum
        // may expose new redexes, so normalize it again.
        while let Some((next, _)) = self.rewrite_at_root(&cur) {
            *steps += 1;
            if *steps > budget {
                return Err(TermError::StepBudgetExceeded { budget });
            }
            cur = self.normalize_inner(&next, steps, budget)?;
        }
        Ok(cur)
    }

    /// Normalize by repeatedly contracting a uniformly chosen redex.
    pub fn normalize_random<R: Rng>(&self, t: &Term, rng: &mut R) -> Result<Term, TermError> {
        let budget = 3 * term_weight(t);
        let mut cur = t.clone();
        for _ in 0..=budget {
            let redexes = self.redexes(&cur);
            if redexes.is_empty() {
                return Ok(cur);
            }
            let (pos, k) = &redexes[rng.gen_range(0..redexes.len())];
            cur = self.contract(&cur, pos, *k).expect("redex was just found");
        }
        Err(TermError::StepBudgetExceeded { budget })
    }

    pub fn is_normal(&self, t: &Term) -> bool {
        self.rewrite_step(t).is_none()
    }
}

/// Weight used as the termination measure: `zero` weighs 3, every other
/// symbol and variable weighs 1.
pub fn term_weight(t: &Term) -> usize {
    match t {
        Term::Zero => 3,
        Term::Var(_) | Term::One => 1,
        Term::Not(a) => 1 + term_weight(a),
        Term::And(a, b) | Term::Or(a, b) => 1 + term_weight(a) + term_weight(b),
    }
}

/// Uniformly random term of depth at most `depth` over the given variables
/// (ground when `vars` is empty).
pub fn random_term<R: Rng>(rng: &mut R, depth: usize, vars: &[&str]) -> Term {
    let leaves = 2 + vars.len();
    if depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..leaves) {
            0 => Term::Zero,
            1 => Term::One,
            i => Term::var(vars[i - 2]),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::not(random_term(rng, depth - 1, vars)),
        1 => Term::and(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)),
        _ => Term::or(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)),
    }
}
