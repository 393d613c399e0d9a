//! Data-encoding concentration for parameterized quantum circuits.
//!
//! The crate computes exact Gaussian-averaged encoded states through Pauli
//! transfer matrices, evaluates the closed-form divergence bounds that govern
//! how fast those averages approach the maximally mixed state, and measures
//! the downstream effect on variational classifiers and optimal state
//! discrimination.
//!
//! Conventions used throughout:
//! - wire 0 is the most significant bit of a basis index (top wire of a circuit);
//! - Pauli letters are ordered `I, Z, X, Y` when used as coefficient indices;
//! - divergences are in bits (`log2`), losses are in nats.

pub mod analytic;
pub mod datasets;
pub mod discriminate;
pub mod encoding;
pub mod error;
pub mod learn;
pub mod metrics;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
