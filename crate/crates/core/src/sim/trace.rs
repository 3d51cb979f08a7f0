use crate::attacks::AttackVariant;
use crate::numkit::{Matrix, Vector};

/// Time-indexed record of one closed-loop run, sampled at the loop
/// period. All per-sample lists have equal length.
#[derive(Debug, Clone)]
pub struct SimTrace {
    pub times: Vec<f64>,
    /// True plant state x(kh).
    pub x: Vec<Vector>,
    /// Injected attack signal a(kh) (zero outside the attack window).
    pub a: Vec<Vector>,
    /// Network output x_a(kh) = x + noise - a, what controller and
    /// detector actually see.
    pub x_a: Vec<Vector>,
    /// Held control input u(kh).
    pub u: Vec<Vector>,
    /// Controlled output z(kh) = C x(kh).
    pub z: Vec<Vector>,
    /// Euclidean norm of x_a per sample.
    pub residual_norm: Vec<f64>,
    /// Detector verdict per sample.
    pub alarm: Vec<bool>,
    /// True when the run stopped early on the divergence sentinel or a
    /// non-finite state.
    pub diverged: bool,
    pub diverge_time: Option<f64>,
    /// Which attack drove the run, if any.
    pub attack_variant: Option<AttackVariant>,
    /// Adaptive gain snapshots per sample, recorded for adaptive attack
    /// variants only.
    pub adaptive_gain: Option<Vec<Matrix>>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_state_norm(&self) -> f64 {
        self.x.iter().map(Vector::norm).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_norm.iter().copied().fold(0.0, f64::max)
    }
}
