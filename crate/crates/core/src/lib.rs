//! Noisy bisection: learning a scalar target from signs of noisy
//! comparisons against adaptively placed thresholds.
//!
//! [`belief`] holds the two-phase approximate learner, [`histogram`] the
//! grid-based exact Bayesian baseline, [`kalman`] the unthresholded
//! oracle, [`sim`] the Monte Carlo harness and [`experiments`] the preset
//! sweeps driven by the `noisy-bisect` binary.

pub mod belief;
pub mod error;
pub mod experiments;
pub mod histogram;
pub mod kalman;
pub mod normal;
pub mod sim;

pub use error::{Error, Result};
