//! Local random-walk search for the maximum of a smooth function on the
//! vertices of a graph.
//!
//! Three walkers are provided: the plain degree-uniform walk, a
//! Metropolis–Hastings walk targeting `p ∝ exp(γ f)`, and a
//! Metropolis–Hastings walk targeting `p ∝ f²` whose proposal is weighted by
//! local cumulative coherence of the graph Laplacian. Around them sit the
//! spectral tools that define smoothness, closed-form convergence and
//! hitting-time bounds, exact small-graph oracles, and an experiment harness.

pub mod analysis;
pub mod bench;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod seed;
pub mod spectral;
pub mod target;
pub mod walkers;

pub use error::{Error, Result};
pub use graph::Graph;
pub use spectral::{CoherenceProfile, GraphFunction, SpectralBasis};
pub use target::TargetDensity;
pub use walkers::{KernelKind, WalkKernel, WalkTrace};
