//! Minimum monochromatic copies of a pattern graph `F` over bipartitions of
//! random F-graphs and Erdős–Rényi graphs, the spin-glass form of that
//! count, and its Gaussian surrogate.
//!
//! Module map:
//! - [`pattern`]: the pattern `F`, automorphisms, strict 1-balance, labeled copies
//! - [`models`]: seeded `G(n, p)` and `H_F(n, q)` samplers, copy ranking, coupling
//! - [`subgraph`]: copy enumeration, `H(σ)`, the spin-polynomial identity
//! - [`optimizer`]: exact Gray-code and annealing minimizers
//! - [`surrogate`]: Gaussian field, covariance oracle, `T_n^α`, `V_n`, predictor
//! - [`experiment`]: sweeps, CSV records, convergence report, invariant suite

pub mod combinatorics;
pub mod error;
pub mod experiment;
pub mod models;
pub mod optimizer;
pub mod oracles;
pub mod pattern;
pub mod spin;
pub mod subgraph;
pub mod surrogate;
pub mod verify;

pub use error::{Error, Result};
pub use models::{FHypergraph, HostGraph, Seed};
pub use pattern::Pattern;
pub use spin::SpinConfig;
