//! Dual-engine performance toolkit for multi-antenna small-cell networks
//! operating clustered dynamic TDD: closed-form success probability and
//! throughput evaluation on one side, a from-scratch stochastic-geometry
//! Monte Carlo simulator on the other, with cross-engine comparison as the
//! primary correctness check.

pub mod error;
pub mod model;
pub mod analytic;
pub mod numerics;
pub mod sim;

pub use error::{CoreError, Result};
pub use model::{Direction, NetworkConfig};
