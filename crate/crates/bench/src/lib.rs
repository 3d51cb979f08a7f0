//! Shared fixtures for the benchmark targets.

use polesim::numkit::Matrix;
use polesim::presets;

/// The nominal closed-loop matrix of the pendulum study.
pub fn pendulum_phi() -> Matrix {
    presets::pendulum_nominal().phi_n
}
