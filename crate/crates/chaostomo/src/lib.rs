//! Simulation of quantum state tomography driven by kicked-top dynamics,
//! with positivity-constrained reconstruction and information-gain metrics.

pub mod basis;
pub mod estimator;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod random;
pub mod spin;

pub use error::{Error, Result};
pub mod metrics_probe { }
