//! Synthetic transmission-grid topologies from exponential random graph
//! models restricted to connected graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: bus-typed simple graphs and the single-edge toggle move.
//! - [`stats`]: topological statistics (k-triangles, clustering, path
//!   lengths, algebraic connectivity) and the per-grid [`stats::GridReport`].
//! - [`model`]: the eight-term Hamiltonian, incremental observable deltas and
//!   Metropolis-Hastings acceptance arithmetic.
//! - [`chain`]: the connectivity-preserving Metropolis-Hastings kernel shared
//!   by estimation and sampling.
//! - [`free_energy`]: the exactly solvable edges-only model.
//! - [`estimator`]: equilibrium-expectation parameter estimation.
//! - [`sampler`]: fixed-parameter ensemble generation with chain thinning.
//! - [`io`]: MATPOWER ingestion, JSON manifests, CSV reports and traces.
//! - [`pipeline`]: the file-based analyze / estimate / sample / closed-form
//!   stages driven by the `gridergm` binary.

pub mod chain;
pub mod error;
pub mod estimator;
pub mod free_energy;
pub mod graph;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{BusType, EdgePresence, EdgeTypePair, LabeledGraph};
pub use model::{ModelKind, ObservableDelta, ObservableVector, ParameterVector};
