//! Spectral sparsification of weighted undirected graphs with bounded
//! independence.
//!
//! Edges are kept with probability proportional to `w_ab * R_ab` (weight times
//! effective resistance), but the coin flips come from a small k-wise
//! independent sample space instead of fully independent randomness. Because
//! that space is small, it can be enumerated seed by seed, and each candidate
//! can be certified with a trace-power test. This gives a fully deterministic
//! sparsifier.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`graph`] | [`WeightedGraph`], Laplacians, girth, edge-list I/O, integer rounding |
//! | [`linalg`] | dense [`SymMatrix`], Jacobi eigensolver, pseudoinverse, spectral approximation test |
//! | [`resistance`] | exact and perturbed effective resistances, Foster residual |
//! | [`kwise`] | k-wise independent sample spaces over GF(2^t) |
//! | [`sparsify`] | the resistance-sampling sparsifier |
//! | [`verify`] | trace-power spectral proximity tester |
//! | [`derand`] | deterministic seed enumeration with verification |
//! | [`lowerbound`] | bounded-independence distributions that disconnect graphs |
//!
//! ```
//! use kwise_sparsify::graph::WeightedGraph;
//! use kwise_sparsify::resistance::effective_resistances_exact;
//!
//! let g = WeightedGraph::parse_edge_list(b"3 3\n0 1 1\n0 2 1\n1 2 1\n").unwrap();
//! let r = effective_resistances_exact(&g).unwrap();
//! assert!(r.values().iter().all(|&x| (x - 2.0 / 3.0).abs() < 1e-12));
//! ```

pub mod derand;
pub mod error;
pub mod graph;
pub mod kwise;
pub mod linalg;
pub mod lowerbound;
pub mod resistance;
pub mod sparsify;
pub mod verify;

pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use linalg::SymMatrix;
