//! Deterministic simulation and analysis of networked control systems
//! under stealthy sensor-measurement attacks.
//!
//! The toolkit covers the full loop: a plant (linear state-space or the
//! nonlinear inverted pendulum), a sensor network where an attacker
//! injects an additive signal, a state-feedback controller, and a
//! norm-threshold detector. Attack constructions include pole-dynamics
//! attacks driven by exact or nominal models and measurement-aided
//! adaptive variants, in continuous and discrete forms. The analysis
//! layer provides eigenstructure initial-condition checks, Lyapunov
//! certificates, sampled-data stability block matrices, detector
//! threshold calibration, and stealthiness/destructiveness verdicts.

pub mod analysis;
pub mod attacks;
pub mod error;
pub mod numkit;
pub mod presets;
pub mod sim;

pub use error::{Error, Result};
pub use numkit::{Matrix, Vector};
