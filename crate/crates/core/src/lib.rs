//! Samplers for random graphs (percolation clusters, critical and
//! survival-conditioned Galton–Watson trees, Sierpinski pre-fractals) and
//! estimators for their fractal, spectral, mass, escape-time and discrete
//! Hausdorff/packing dimensions.

pub mod barlow_taylor;
pub mod dimension;
pub mod error;
pub mod generators;
pub mod graph;
pub mod gw;
pub mod parallel;
pub mod percolation;
pub mod rng;
pub mod solver;
pub mod stats;
pub mod suite;
pub mod walk;

pub use dimension::{ExponentFit, Recurrence};
pub use error::{Error, Result};
pub use graph::{BallProfile, Distance, Graph, MassProfile, VertexId};
pub use stats::EstimateCI;
