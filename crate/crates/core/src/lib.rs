//! Perfect samplers for weighted graphlets, subset polymer models, the
//! hard-core model on unbalanced bipartite graphs and the low-temperature
//! Potts model on expanders.
//!
//! All randomness is exact: acceptance probabilities are rationals or
//! computable reals, drawn against a stream of fair bits from
//! [`RandomSource`]. The guide in `book/` walks through the pieces.

pub mod error;
pub mod exact;
pub mod graph;
pub mod oracle;
pub mod percolation;
pub mod polymer;
pub mod spin;

pub use error::{Error, ErrorKind, Result};
pub use exact::{ComputableProb, Prob, RandomSource, Rational};
pub use graph::{Adjacency, Graph, ImplicitGraph};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/graphs.md")]
    struct Graphs;
    #[doc = include_str!("../../../book/src/exact-randomness.md")]
    struct ExactRandomness;
    #[doc = include_str!("../../../book/src/graphlets.md")]
    struct Graphlets;
    #[doc = include_str!("../../../book/src/polymers.md")]
    struct Polymers;
    #[doc = include_str!("../../../book/src/spin-systems.md")]
    struct SpinSystems;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
