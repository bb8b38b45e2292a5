//! Ordered loose paths in random `r`-uniform hypergraphs.
//!
//! An ordered loose path of length `ℓ` is a sequence of edges `E_1, …, E_ℓ`
//! with `max(E_i) = min(E_{i+1})`. Path length is always an edge count.
//! Vertex labels are 1-based throughout: a hypergraph on `n` vertices uses
//! the labels `1..=n`.
//!
//! The crate is organised as
//!
//! * [`hypergraph`]: ordered hypergraphs, the `H^(r)(n, p)` samplers and the
//!   plain edge-list file format,
//! * [`paths`]: exact, greedy and counting solvers with brute-force oracles,
//! * [`theory`]: closed-form predictions (extension-length series, bands,
//!   thresholds, regime classification, Poisson rates),
//! * [`experiments`]: the seeded Monte Carlo harness with CSV/JSON export.
//!
//! With the default `parallel` feature, trials run on a rayon pool. Without
//! it every entry point runs sequentially and produces identical output.

pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod paths;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
pub use hypergraph::{Edge, OrderedHypergraph, UnitEdgeMask};
pub use rng::RngSeed;
