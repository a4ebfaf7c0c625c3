//! Terms over the DeMorgan signature and their rewriting system.

pub mod confluence;
pub mod term;
pub mod trs;

pub use confluence::{check_convergence, critical_pairs, joinable, ConvergenceReport, CriticalPair};
pub use term::{apply_substitution, match_term, unify, Binding, Position, Term};
pub use trs::{boolean_identities, term_weight, RuleFamily, TermError, TermRule, TermStep, Trs};
