//! Exact and Monte Carlo tools for spread hypergraphs.
//!
//! A hypergraph here is a multiset of vertex sets over `0..n`. The crate
//! certifies spread conditions exactly, generates standard families, runs the
//! random fragmentation process, counts bad pairs, and estimates containment
//! probabilities of random vertex sets.

pub mod badpairs;
pub mod bits;
pub mod bounds;
pub mod combinadics;
pub mod error;
pub mod exact;
pub mod fragmentation;
pub mod generators;
pub mod hypergraph;
pub mod rng;
pub mod spread;
pub mod suite;
pub mod threshold;

pub use error::{Budget, Error, Result};
pub use exact::{parse_rational, Rational, RootValue};
pub use hypergraph::{CountMode, Hypergraph, IntersectionProfile, Uniformity, VertexSet};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/hypergraphs.md")]
mod book_hypergraphs {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spread.md")]
mod book_spread {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fragmentation.md")]
mod book_fragmentation {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bad-pairs.md")]
mod book_bad_pairs {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/thresholds.md")]
mod book_thresholds {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/reproducibility.md")]
mod book_reproducibility {}
