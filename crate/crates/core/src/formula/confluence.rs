//! Convergence certificate for a term rewriting system: critical pairs with
//! joinability (local confluence) and a weight-based termination proof.
//! Newman's lemma turns the two into confluence.

use rand::Rng;
use serde::Serialize;

use super::term::{apply_substitution, unify, Binding, Position, Term};
use super::trs::{random_term, term_weight, TermError, TermRule, Trs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    /// The overlapped term both rules rewrite.
    pub peak: Term,
    /// Result of rewriting the peak at the root with `outer`.
    pub left: Term,
    /// Result of rewriting the peak at `position` with `inner`.
    pub right: Term,
    pub outer: String,
    pub inner: String,
    pub position: Position,
}

fn rename_apart(rule: &TermRule) -> (Term, Term) {
    let prime = |v: &str| format!("{v}'");
    (rule.lhs.rename(&prime), rule.rhs.rename(&prime))
}

/// All critical pairs of `trs`.
///
/// For every ordered pair of rules and every non-variable position of the
/// first rule's left-hand side that unifies with the (renamed) left-hand side
/// of the second, emits the two one-step results from the overlapped term.
/// The trivial overlap of a rule with itself at the root is skipped.
pub fn critical_pairs(trs: &Trs) -> Vec<CriticalPair> {
    let mut out = Vec::new();
    for (i, outer) in trs.rules().iter().enumerate() {
        for (j, inner) in trs.rules().iter().enumerate() {
            let (inner_lhs, inner_rhs) = rename_apart(inner);
            for pos in outer.lhs.positions() {
                if i == j && pos.is_root() {
                    continue;
                }
                let sub = outer.lhs.subterm(&pos).expect("own position");
                if sub.is_var() {
                    continue;
                }
                let Some(sigma) = unify(sub, &inner_lhs) else {
                    continue;
                };
                out.push(overlap(outer, &inner.name, &inner_rhs, &pos, &sigma));
            }
        }
    }
    out
}

fn overlap(outer: &TermRule, inner: &str, inner_rhs: &Term, pos: &Position, sigma: &Binding) -> CriticalPair {
    let peak = apply_substitution(&outer.lhs, sigma);
    CriticalPair {
        left: apply_substitution(&outer.rhs, sigma),
        right: peak.replace_at(&pos.0, apply_substitution(inner_rhs, sigma)),
        peak,
        outer: outer.name.clone(),
        inner: inner.to_string(),
        position: pos.clone(),
    }
}

/// Both terms reach the same normal form. Variables are treated as
/// uninterpreted constants.
pub fn joinable(trs: &Trs, a: &Term, b: &Term) -> Result<bool, TermError> {
    Ok(trs.normalize(a)? == trs.normalize(b)?)
}

/// Linear form of `weight(σ(lhs)) - weight(σ(rhs))` in the weights of the
/// variables' images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDrop {
    pub rule: String,
    /// Constant part: symbol weights with every variable weighted zero.
    pub constant: i64,
    /// Per-variable coefficient: occurrences in lhs minus occurrences in rhs.
    pub coefficients: Vec<(String, i64)>,
}

impl WeightDrop {
    pub fn of(rule: &TermRule) -> WeightDrop {
        let vars = rule.lhs.variables();
        let symbolic = |t: &Term| -> i64 {
            term_weight(t) as i64 - vars.iter().map(|v| t.occurrences(v) as i64).sum::<i64>()
        };
        WeightDrop {
            rule: rule.name.clone(),
            constant: symbolic(&rule.lhs) - symbolic(&rule.rhs),
            coefficients: vars
                .iter()
                .map(|v| (v.clone(), rule.lhs.occurrences(v) as i64 - rule.rhs.occurrences(v) as i64))
                .collect(),
        }
    }

    /// With every coefficient non-negative and every image weighing at least
    /// one, the drop is at least `constant + Σ c`, which must be positive.
    pub fn strictly_decreasing(&self) -> bool {
        self.coefficients.iter().all(|(_, c)| *c >= 0)
            && self.constant + self.coefficients.iter().map(|(_, c)| c).sum::<i64>() > 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub rules: usize,
    pub critical_pairs: usize,
    pub joinable_pairs: usize,
    pub non_joinable: Vec<String>,
    pub symbolic_decrease: Vec<WeightDrop>,
    pub sampled_instances: usize,
    pub sampled_failures: Vec<String>,
}

impl ConvergenceReport {
    pub fn locally_confluent(&self) -> bool {
        self.non_joinable.is_empty() && self.joinable_pairs == self.critical_pairs
    }

    pub fn terminating(&self) -> bool {
        self.symbolic_decrease.iter().all(WeightDrop::strictly_decreasing) && self.sampled_failures.is_empty()
    }

    pub fn convergent(&self) -> bool {
        self.locally_confluent() && self.terminating()
    }
}

/// Run the full certificate: joinability of every critical pair, the
/// symbolic weight drop of every rule, and the weight drop on `samples`
/// random ground instantiations of each rule.
pub fn check_convergence<R: Rng>(trs: &Trs, samples: usize, rng: &mut R) -> Result<ConvergenceReport, TermError> {
    let pairs = critical_pairs(trs);
    let mut joinable_pairs = 0;
    let mut non_joinable = Vec::new();
    for cp in &pairs {
        if joinable(trs, &cp.left, &cp.right)? {
            joinable_pairs += 1;
        } else {
            non_joinable.push(format!(
                "{} / {} at {}: {} vs {}",
                cp.outer, cp.inner, cp.position, cp.left, cp.right
            ));
        }
    }

    let symbolic_decrease = trs.rules().iter().map(WeightDrop::of).collect();

    let mut sampled_failures = Vec::new();
    for _ in 0..samples {
        let ground = random_term(rng, 4, &[]);
        for rule in trs.rules() {
            let sigma: Binding = rule.lhs.variables().into_iter().map(|v| (v, ground.clone())).collect();
            let l = term_weight(&apply_substitution(&rule.lhs, &sigma));
            let r = term_weight(&apply_substitution(&rule.rhs, &sigma));
            if l <= r {
                sampled_failures.push(format!("{} with g = {ground}: {l} <= {r}", rule.name));
            }
        }
    }

    Ok(ConvergenceReport {
        rules: trs.rules().len(),
        critical_pairs: pairs.len(),
        joinable_pairs,
        non_joinable,
        symbolic_decrease,
        sampled_instances: samples * trs.rules().len(),
        sampled_failures,
    })
}
