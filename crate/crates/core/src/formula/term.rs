//! Tree-shaped DeMorgan formulas: construction, substitution, matching,
//! unification and the s-expression text form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A formula over the signature `{and, or, not, 0, 1}` plus variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
}

/// A substitution from variable names to terms.
pub type Binding = BTreeMap<String, Term>;

/// A path from the root of a term to one of its subterms; each entry is a
/// zero-based child index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut path = self.0.clone();
        path.push(i);
        Position(path)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// `x{i}`, the variable standing for circuit input `i`.
    pub fn input(i: u32) -> Term {
        Term::Var(format!("x{i}"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    /// The canonical false constant `not one`.
    pub fn falsum() -> Term {
        Term::not(Term::One)
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Zero | Term::One => vec![],
            Term::Not(a) => vec![a],
            Term::And(a, b) | Term::Or(a, b) => vec![a, b],
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Number of occurrences of variable `name`.
    pub fn occurrences(&self, name: &str) -> usize {
        match self {
            Term::Var(v) => usize::from(v == name),
            _ => self.children().iter().map(|c| c.occurrences(name)).sum(),
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Replace the subterm at `pos` with `replacement`.
    pub fn replace_at(&self, pos: &[usize], replacement: Term) -> Term {
        let Some((&first, rest)) = pos.split_first() else {
            return replacement;
        };
        match (self, first) {
            (Term::Not(a), 0) => Term::not(a.replace_at(rest, replacement)),
            (Term::And(a, b), 0) => Term::and(a.replace_at(rest, replacement), (**b).clone()),
            (Term::And(a, b), 1) => Term::and((**a).clone(), b.replace_at(rest, replacement)),
            (Term::Or(a, b), 0) => Term::or(a.replace_at(rest, replacement), (**b).clone()),
            (Term::Or(a, b), 1) => Term::or((**a).clone(), b.replace_at(rest, replacement)),
            _ => panic!("position {pos:?} does not exist in {self}"),
        }
    }

    /// All positions, in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(Position::root(), &mut out);
        out
    }

    fn walk_positions(&self, here: Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        for (i, c) in self.children().into_iter().enumerate() {
            c.walk_positions(here.child(i), out);
        }
    }

    /// Evaluate under an assignment of variables to bits. Unassigned
    /// variables are reported as `None`.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<bool>) -> Option<bool> {
        Some(match self {
            Term::Var(v) => env(v)?,
            Term::Zero => false,
            Term::One => true,
            Term::Not(a) => !a.eval(env)?,
            Term::And(a, b) => a.eval(env)? & b.eval(env)?,
            Term::Or(a, b) => a.eval(env)? | b.eval(env)?,
        })
    }

    /// Rename every variable with `f`.
    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Zero => Term::Zero,
            Term::One => Term::One,
            Term::Not(a) => Term::not(a.rename(f)),
            Term::And(a, b) => Term::and(a.rename(f), b.rename(f)),
            Term::Or(a, b) => Term::or(a.rename(f), b.rename(f)),
        }
    }
}

/// Replace every variable in the domain of `sigma` by its image.
pub fn apply_substitution(t: &Term, sigma: &Binding) -> Term {
    match t {
        Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Zero => Term::Zero,
        Term::One => Term::One,
        Term::Not(a) => Term::not(apply_substitution(a, sigma)),
        Term::And(a, b) => Term::and(apply_substitution(a, sigma), apply_substitution(b, sigma)),
        Term::Or(a, b) => Term::or(apply_substitution(a, sigma), apply_substitution(b, sigma)),
    }
}

/// Root-anchored one-way matching: find `sigma` with `sigma(pattern) == t`.
///
/// A variable occurring twice in `pattern` must be bound to equal subterms.
pub fn match_term(pattern: &Term, t: &Term) -> Option<Binding> {
    let mut sigma = Binding::new();
    match_into(pattern, t, &mut sigma).then_some(sigma)
}

fn match_into(pattern: &Term, t: &Term, sigma: &mut Binding) -> bool {
    match (pattern, t) {
        (Term::Var(v), _) => match sigma.get(v) {
            Some(bound) => bound == t,
            None => {
                sigma.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) | (Term::One, Term::One) => true,
        (Term::Not(p), Term::Not(a)) => match_into(p, a, sigma),
        (Term::And(p, q), Term::And(a, b)) | (Term::Or(p, q), Term::Or(a, b)) => {
            match_into(p, a, sigma) && match_into(q, b, sigma)
        }
        _ => false,
    }
}

/// Syntactic unification. Returns an idempotent most general unifier.
pub fn unify(a: &Term, b: &Term) -> Option<Binding> {
    let mut sigma = Binding::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((s, t)) = stack.pop() {
        let s = apply_substitution(&s, &sigma);
        let t = apply_substitution(&t, &sigma);
        if s == t {
            continue;
        }
        match (s, t) {
            (Term::Var(v), other) | (other, Term::Var(v)) => {
                if other.occurrences(&v) > 0 {
                    return None;
                }
                let single: Binding = [(v.clone(), other.clone())].into_iter().collect();
                for image in sigma.values_mut() {
                    *image = apply_substitution(image, &single);
                }
                sigma.insert(v, other);
            }
            (Term::Not(x), Term::Not(y)) => stack.push((*x, *y)),
            (Term::And(x1, x2), Term::And(y1, y2)) | (Term::Or(x1, x2), Term::Or(y1, y2)) => {
                stack.push((*x2, *y2));
                stack.push((*x1, *y1));
            }
            _ => return None,
        }
    }
    Some(sigma)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "zero"),
            Term::One => write!(f, "one"),
            Term::Not(a) => write!(f, "(not {a})"),
            Term::And(a, b) => write!(f, "(and {a} {b})"),
            Term::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseTermError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("trailing input after term: `{0}`")]
    Trailing(String),
}

fn tokenize(s: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '\'')
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Term, ParseTermError> {
    let tok = tokens.get(*pos).ok_or(ParseTermError::UnexpectedEnd)?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let op = tokens.get(*pos).ok_or(ParseTermError::UnexpectedEnd)?.clone();
            *pos += 1;
            let term = match op.as_str() {
                "not" => Term::not(parse_tokens(tokens, pos)?),
                "and" => {
                    let a = parse_tokens(tokens, pos)?;
                    Term::and(a, parse_tokens(tokens, pos)?)
                }
                "or" => {
                    let a = parse_tokens(tokens, pos)?;
                    Term::or(a, parse_tokens(tokens, pos)?)
                }
                other => return Err(ParseTermError::UnknownOperator(other.to_string())),
            };
            match tokens.get(*pos) {
                Some(t) if t == ")" => {
                    *pos += 1;
                    Ok(term)
                }
                Some(t) => Err(ParseTermError::UnexpectedToken(t.clone())),
                None => Err(ParseTermError::UnexpectedEnd),
            }
        }
        ")" => Err(ParseTermError::UnexpectedToken(")".into())),
        "zero" => Ok(Term::Zero),
        "one" => Ok(Term::One),
        "not" | "and" | "or" => Err(ParseTermError::UnexpectedToken(tok.clone())),
        ident if is_identifier(ident) => Ok(Term::var(ident)),
        other => Err(ParseTermError::InvalidIdentifier(other.to_string())),
    }
}

impl std::str::FromStr for Term {
    type Err = ParseTermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let t = parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ParseTermError::Trailing(tokens[pos..].join(" ")));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn substitution_examples() {
        let sigma: Binding = [("g".to_string(), t("(or x1 x2)"))].into();
        assert_eq!(apply_substitution(&t("(and g one)"), &sigma), t("(and (or x1 x2) one)"));
        assert_eq!(apply_substitution(&t("(not x1)"), &Binding::new()), t("(not x1)"));
        let sigma: Binding = [("g".to_string(), Term::falsum())].into();
        assert_eq!(
            apply_substitution(&t("(and g (not g))"), &sigma),
            t("(and (not one) (not (not one)))")
        );
    }

    #[test]
    fn matching_examples() {
        let m = match_term(&t("(and g one)"), &t("(and (or x1 x2) one)")).unwrap();
        assert_eq!(m["g"], t("(or x1 x2)"));
        assert_eq!(match_term(&t("(and g (not g))"), &t("(and x1 (not x2))")), None);
        let m = match_term(&t("(and g (not g))"), &t("(and (not x1) (not (not x1)))")).unwrap();
        assert_eq!(m["g"], t("(not x1)"));
    }

    #[test]
    fn unification_is_a_unifier() {
        let a = t("(and g (not g))");
        let b = t("(and (not h) k)");
        let sigma = unify(&a, &b).unwrap();
        assert_eq!(apply_substitution(&a, &sigma), apply_substitution(&b, &sigma));
        assert_eq!(unify(&t("g"), &t("(not g)")), None);
        assert_eq!(unify(&t("zero"), &t("one")), None);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["zero", "(not (not g))", "(and (or x1 x2) (not one))"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!("(xor a b)".parse::<Term>().is_err());
        assert!("(and a)".parse::<Term>().is_err());
        assert!("a b".parse::<Term>().is_err());
    }

    #[test]
    fn positions_and_replacement() {
        let term = t("(and g (not g))");
        assert_eq!(term.positions().len(), 4);
        let p = Position(vec![1]);
        assert_eq!(term.subterm(&p), Some(&t("(not g)")));
        assert_eq!(term.replace_at(&p.0, Term::One), t("(and g one)"));
        assert_eq!(Position(vec![1, 0]).to_string(), "2.1");
    }
}
