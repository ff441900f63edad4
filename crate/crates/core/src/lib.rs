pub mod cli;
pub mod error;
pub mod estimator;
pub mod montecarlo;
pub mod quadrature;
pub mod rv_analysis;
pub mod samplers;
pub mod special_fn;
pub mod statistics;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
