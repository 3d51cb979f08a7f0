use crate::error::{Error, Result};
use crate::numkit::{Matrix, Vector};

/// Nominal design model: the (A_n, B_n, K_n) triple known to both the
/// defender (controller design) and the attacker, plus the derived
/// nominal closed loop Phi_n = A_n + B_n K_n.
#[derive(Debug, Clone)]
pub struct NominalModel {
    pub a_n: Matrix,
    pub b_n: Matrix,
    pub k_n: Matrix,
    pub phi_n: Matrix,
}

impl NominalModel {
    pub fn new(a_n: Matrix, b_n: Matrix, k_n: Matrix) -> Result<Self> {
        if !a_n.is_square() {
            return Err(Error::DimensionMismatch("A_n must be square".into()));
        }
        if b_n.rows() != a_n.rows() {
            return Err(Error::DimensionMismatch("B_n rows != A_n rows".into()));
        }
        if k_n.rows() != b_n.cols() || k_n.cols() != a_n.rows() {
            return Err(Error::DimensionMismatch("K_n must be m x p".into()));
        }
        let phi_n = &a_n + &(&b_n * &k_n);
        Ok(NominalModel { a_n, b_n, k_n, phi_n })
    }

    pub fn state_dim(&self) -> usize {
        self.a_n.rows()
    }
}

/// Norm-threshold detector: alarm when ||x_a|| >= epsilon. `settle_time`
/// marks the initial transient excluded from calibration statistics.
#[derive(Debug, Clone, Copy)]
pub struct DetectorConfig {
    pub epsilon: f64,
    pub settle_time: f64,
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("detector epsilon must be > 0".into()));
        }
        if self.settle_time < 0.0 {
            return Err(Error::InvalidConfig("detector settle_time must be >= 0".into()));
        }
        Ok(())
    }
}

/// Alarm test: true iff the residual reaches the threshold (the
/// attack-free condition is the strict inequality ||x_a|| < epsilon, so
/// the boundary counts as an alarm).
pub fn detector_test(x_a: &Vector, cfg: &DetectorConfig) -> bool {
    x_a.norm() >= cfg.epsilon
}

/// Seeded zero-mean Gaussian measurement noise, i.i.d. per state channel
/// per sample. Stands in for the physical randomness of a real rig so
/// that threshold calibration is meaningful.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    pub sigma_meas: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_meas >= 0.0) {
            return Err(Error::InvalidConfig("sigma_meas must be >= 0".into()));
        }
        Ok(())
    }
}

/// Sampled-data loop timing, initial state, attack window and admissible
/// output limits.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Simulation horizon in seconds.
    pub t_end: f64,
    /// RK4 integrator substep.
    pub dt_int: f64,
    /// Sensor/controller sampling period (zero-order hold).
    pub h_sample: f64,
    /// Attack window start.
    pub t_start: f64,
    /// Attack window end (inclusive).
    pub t_stop: f64,
    /// Initial plant state.
    pub x0: Vector,
    /// Per-output admissible limits xi_j (all positive).
    pub limits: Vector,
    /// Stop the run at the first sample where an output limit is
    /// crossed, mirroring a rig that engages protection when the state
    /// leaves the admissible region.
    pub stop_at_limit: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_int > 0.0) || !(self.h_sample > 0.0) {
            return Err(Error::InvalidConfig("dt_int and h_sample must be > 0".into()));
        }
        if self.dt_int > self.h_sample * (1.0 + 1e-9) {
            return Err(Error::InvalidConfig("dt_int must not exceed h_sample".into()));
        }
        let sub = self.h_sample / self.dt_int;
        if (sub - sub.round()).abs() > 1e-6 {
            return Err(Error::InvalidConfig(
                "h_sample must be an integer multiple of dt_int".into(),
            ));
        }
        if !(self.t_start <= self.t_stop && self.t_stop <= self.t_end + 1e-12) {
            return Err(Error::InvalidConfig("need t_start <= t_stop <= t_end".into()));
        }
        if self.limits.as_slice().iter().any(|&l| !(l > 0.0)) {
            return Err(Error::InvalidConfig("limits must be strictly positive".into()));
        }
        Ok(())
    }

    pub fn substeps(&self) -> usize {
        (self.h_sample / self.dt_int).round() as usize
    }

    pub fn sample_count(&self) -> usize {
        (self.t_end / self.h_sample).round() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detector_boundary_is_alarm() {
        let det = DetectorConfig { epsilon: 3.1, settle_time: 0.0 };
        assert!(!detector_test(&Vector::zeros(4), &det));
        let mut v = Vector::zeros(4);
        v[0] = 3.1;
        assert!(detector_test(&v, &det));
        v[0] = 3.05;
        assert!(!detector_test(&v, &det));
    }

    #[test]
    fn sim_config_rejects_bad_timing() {
        let mut cfg = SimConfig {
            t_end: 1.0,
            dt_int: 1e-3,
            h_sample: 1e-2,
            t_start: 0.0,
            t_stop: 1.0,
            x0: Vector::zeros(4),
            limits: Vector::from_slice(&[0.3, 0.8]).unwrap(),
            stop_at_limit: false,
        };
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.substeps(), 10);
        cfg.dt_int = 3e-3; // not a divisor of h_sample
        assert!(cfg.validate().is_err());
        cfg.dt_int = 1e-3;
        cfg.t_start = 2.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn nominal_model_derives_phi() {
        let nm = crate::presets::pendulum_nominal();
        // spot-check one derived entry: Phi_n[3][1] = 29.4311 + 3.0001*(-29.6225)
        let expect = 29.4311 + 3.0001 * (-29.6225);
        assert!((nm.phi_n[(3, 1)] - expect).abs() < 1e-10);
    }
}
