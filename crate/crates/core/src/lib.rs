//! Gate elimination as convergent term graph rewriting.
//!
//! - [`formula`]: DeMorgan terms, the 16-rule rewriting system and its
//!   convergence certificate.
//! - [`circuit`]: circuits as rooted acyclic hypergraphs, with evaluation,
//!   unrolling, bisimilarity, isomorphism and a text format.
//! - [`rewrite`]: the graph version of the rules and the normalizer.
//! - [`refuter`]: the constructive XOR lower-bound refuter.
//! - [`basis`]: the U2 basis, translations and the non-confluence witness.
//! - [`cli`]: the `gatelim` command line.

pub mod basis;
pub mod circuit;
pub mod cli;
pub mod formula;
pub mod refuter;
pub mod rewrite;
