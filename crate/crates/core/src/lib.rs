//! Bayesian and frequentist estimation of ARFIMA(p, d, q) models with p, q <= 1.

pub mod abc;
pub mod acvf;
pub mod draws;
pub mod error;
pub mod filter;
pub mod forecast;
pub mod io;
pub mod likelihood;
pub mod mcmc;
pub mod mle;
pub mod optim;
pub mod params;
pub mod simulate;
pub mod spectral;
pub mod stats;
pub mod study;
pub mod toeplitz;

pub use error::{Error, Result};
pub use params::{ArfimaParams, Component, ModelOrder, Series};
