//! Sampling-type approximation operators built on a symmetrized
//! perturbed-tanh kernel.

pub mod activation;
pub mod cli;
pub mod convergence;
pub mod density;
pub mod error;
pub mod operators;
pub(crate) mod quadrature;
pub mod testbed;
pub(crate) mod util;

pub use error::{Error, Result};
