//! Classical simulation of amplitude amplification and estimation, and a
//! quantum-style prediction path for binary-classification ensembles.
//!
//! Module map:
//! - [`statevector`]: dense register simulation (gates, QFT, controlled powers, measurement).
//! - [`grover`]: reflections, the Grover iterate and query accounting.
//! - [`estimators`]: QSearch, QFT-based estimation, and the doubling and bisection estimators.
//! - [`ensemble`]: classifiers, voting, the amplitude-encoding oracle and quantum prediction.
//! - [`harness`]: experiment configs, sweeps, comparisons and reports.

pub mod ensemble;
pub mod error;
pub mod estimators;
pub mod grover;
pub mod harness;
pub mod oracles;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
