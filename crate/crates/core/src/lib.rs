//! L1-fidelity Tikhonov regularization for exponentially ill-posed problems
//! under impulsive noise.

pub mod analytic;
pub mod error;
pub mod harness;
pub mod noise;
pub mod operators;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
