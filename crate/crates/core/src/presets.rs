//! Canonical inverted-pendulum study: nominal model, truth plant,
//! decompositions and ready-to-run attack scenarios. Everything the
//! experiments need is encoded here so no caller has to hand-type system
//! matrices.

use crate::attacks::AttackEngine;
use crate::error::Result;
use crate::numkit::{solve_lyapunov, Matrix, Vector};
use crate::sim::{DetectorConfig, NoiseConfig, NominalModel, PlantModel, SimConfig};

/// Detector threshold used by the pendulum scenarios.
pub const PENDULUM_EPSILON: f64 = 3.1;
/// Measurement noise level tuned so attack-free calibration lands near
/// the 3.1 threshold (sup statistics around 2.2-3.1).
pub const PENDULUM_SIGMA: f64 = 0.25;
/// Settle time excluded from calibration statistics.
pub const PENDULUM_SETTLE: f64 = 5.0;
/// Angular-acceleration gain of the pendulum (lm/J of the rig).
pub const PENDULUM_ACCEL_GAIN: f64 = 3.0001;
pub const PENDULUM_GRAVITY: f64 = 9.81;

/// Nominal model of the pendulum: linearization about the upright
/// equilibrium with the rig's reference controller gain.
pub fn pendulum_nominal() -> NominalModel {
    let a_n = Matrix::from_rows(&[
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 29.4311, 0.0, 0.0],
    ])
    .unwrap();
    let b_n = Matrix::from_rows(&[vec![0.0], vec![0.0], vec![1.0], vec![3.0001]]).unwrap();
    let k_n =
        Matrix::from_rows(&[vec![3.7569, -29.6225, 4.0648, -5.4563]]).unwrap();
    NominalModel::new(a_n, b_n, k_n).expect("pendulum nominal dimensions")
}

/// Controlled outputs: cart position and pendulum angle.
pub fn pendulum_output_matrix() -> Matrix {
    Matrix::from_rows(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]).unwrap()
}

/// Admissible limits: |alpha| < 0.3 m, |theta| < 0.8 rad.
pub fn pendulum_limits() -> Vector {
    Vector::from_slice(&[0.3, 0.8]).unwrap()
}

/// Nonlinear truth plant; its linearization about theta = 0 is the
/// nominal model, so model mismatch is exactly the linearization error.
pub fn pendulum_plant() -> PlantModel {
    PlantModel::NonlinearPendulum {
        accel_gain: PENDULUM_ACCEL_GAIN,
        gravity: PENDULUM_GRAVITY,
        c: pendulum_output_matrix(),
    }
}

/// Linear plant whose A is the nominal model taken as exact truth (for
/// exact-model attack studies).
pub fn pendulum_linear_plant() -> PlantModel {
    let nm = pendulum_nominal();
    PlantModel::Linear { a: nm.a_n, b: nm.b_n, c: pendulum_output_matrix() }
}

/// Reference real-Jordan decomposition A_n = X_n J_n X_n^-1: a double
/// zero root with a chain plus the stable/unstable pair at -+5.425.
pub fn pendulum_jordan() -> (Matrix, Matrix) {
    let x_n = Matrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.5, 0.5],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, -2.7125, 2.7125],
    ])
    .unwrap();
    let j_n = Matrix::from_rows(&[
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, -5.425, 0.0],
        vec![0.0, 0.0, 0.0, 5.425],
    ])
    .unwrap();
    (x_n, j_n)
}

/// P solved from the nominal closed loop with Q = I (the matrix the
/// adaptive pendulum attacks use).
pub fn pendulum_lyapunov_p() -> Matrix {
    let nm = pendulum_nominal();
    solve_lyapunov(&nm.phi_n, &Matrix::identity(4)).expect("nominal loop is Hurwitz")
}

/// Attack specification: everything needed to build a fresh engine for a
/// run. Rebuilding per run keeps batch commands (calibration, compare)
/// independent and seed-deterministic.
#[derive(Debug, Clone)]
pub enum AttackSpec {
    TpdaExact { a: Matrix, aux0: Vector },
    TpdaNominal { aux0: Vector },
    MapdaIdeal { phi_true: Matrix, q: Matrix, z: Matrix, f_a0: Matrix, aux0: Vector },
    MapdaRegulated { q: Matrix, z: Matrix, f_a0: Matrix, aux0: Vector },
    DiscreteTpdaExact { a: Matrix, aux0: Vector },
    DiscreteTpdaNominal { aux0: Vector },
    DiscreteMapda { q: Matrix, z: Matrix, f_a0: Matrix, aux0: Vector, h: f64 },
    DelayInducedDiscreteMapda {
        a: Matrix,
        b: Matrix,
        k_gain: Matrix,
        q: Matrix,
        z1: Matrix,
        p1: Option<Matrix>,
        p4: Option<Matrix>,
        f_a0: Matrix,
        aux0: Vector,
        h: f64,
    },
}

impl AttackSpec {
    pub fn build(&self, nominal: &NominalModel) -> Result<AttackEngine> {
        match self {
            AttackSpec::TpdaExact { a, aux0 } => AttackEngine::tpda_exact(a.clone(), aux0.clone()),
            AttackSpec::TpdaNominal { aux0 } => {
                AttackEngine::tpda_nominal(nominal.a_n.clone(), aux0.clone())
            }
            AttackSpec::MapdaIdeal { phi_true, q, z, f_a0, aux0 } => AttackEngine::mapda_ideal(
                nominal.a_n.clone(),
                phi_true,
                q.clone(),
                z.clone(),
                f_a0.clone(),
                aux0.clone(),
            ),
            AttackSpec::MapdaRegulated { q, z, f_a0, aux0 } => AttackEngine::mapda_regulated(
                nominal.a_n.clone(),
                &nominal.phi_n,
                q.clone(),
                z.clone(),
                f_a0.clone(),
                aux0.clone(),
            ),
            AttackSpec::DiscreteTpdaExact { a, aux0 } => {
                AttackEngine::discrete_tpda_exact(a.clone(), aux0.clone())
            }
            AttackSpec::DiscreteTpdaNominal { aux0 } => {
                AttackEngine::discrete_tpda_nominal(nominal.a_n.clone(), aux0.clone())
            }
            AttackSpec::DiscreteMapda { q, z, f_a0, aux0, h } => AttackEngine::discrete_mapda(
                nominal.a_n.clone(),
                &nominal.phi_n,
                q.clone(),
                z.clone(),
                f_a0.clone(),
                aux0.clone(),
                *h,
            ),
            AttackSpec::DelayInducedDiscreteMapda {
                a,
                b,
                k_gain,
                q,
                z1,
                p1,
                p4,
                f_a0,
                aux0,
                h,
            } => {
                let p1 = match p1 {
                    Some(m) => m.clone(),
                    None => solve_lyapunov(&nominal.phi_n, q)?,
                };
                let p4 = match p4 {
                    Some(m) => m.clone(),
                    None => Matrix::identity(a.rows()).scale(0.01),
                };
                AttackEngine::delay_induced_discrete_mapda(
                    a.clone(),
                    nominal.a_n.clone(),
                    b.clone(),
                    k_gain.clone(),
                    &nominal.phi_n,
                    q.clone(),
                    z1.clone(),
                    p1,
                    p4,
                    f_a0.clone(),
                    aux0.clone(),
                    *h,
                )
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AttackSpec::TpdaExact { .. } => "tpda-exact",
            AttackSpec::TpdaNominal { .. } => "tpda-nominal",
            AttackSpec::MapdaIdeal { .. } => "mapda-ideal",
            AttackSpec::MapdaRegulated { .. } => "mapda-regulated",
            AttackSpec::DiscreteTpdaExact { .. } => "discrete-tpda-exact",
            AttackSpec::DiscreteTpdaNominal { .. } => "discrete-tpda-nominal",
            AttackSpec::DiscreteMapda { .. } => "discrete-mapda",
            AttackSpec::DelayInducedDiscreteMapda { .. } => "delay-induced-discrete-mapda",
        }
    }
}

/// A fully specified experiment.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub plant: PlantModel,
    pub nominal: NominalModel,
    pub k_gain: Matrix,
    pub attack: Option<AttackSpec>,
    pub sim: SimConfig,
    pub noise: NoiseConfig,
    pub detector: DetectorConfig,
}

impl Scenario {
    pub fn build_engine(&self) -> Result<Option<AttackEngine>> {
        match &self.attack {
            Some(spec) => Ok(Some(spec.build(&self.nominal)?)),
            None => Ok(None),
        }
    }
}

fn pendulum_scenario_base() -> Scenario {
    let nominal = pendulum_nominal();
    let k_gain = nominal.k_n.clone();
    Scenario {
        plant: pendulum_plant(),
        nominal,
        k_gain,
        attack: None,
        sim: SimConfig {
            t_end: 20.0,
            dt_int: 1e-3,
            h_sample: 1e-2,
            t_start: 0.0,
            t_stop: 20.0,
            x0: Vector::from_slice(&[0.1, 0.1, 0.0, 0.0]).unwrap(),
            limits: pendulum_limits(),
            stop_at_limit: false,
        },
        noise: NoiseConfig { sigma_meas: PENDULUM_SIGMA, seed: 1 },
        detector: DetectorConfig { epsilon: PENDULUM_EPSILON, settle_time: PENDULUM_SETTLE },
    }
}

/// Attack-free pendulum run, the calibration baseline.
pub fn pendulum_attack_free() -> Scenario {
    pendulum_scenario_base()
}

/// Adaptive attack with the reference parameters (Q = I, Z = 10000 I,
/// F_a(0) = I, aux(0) = 1e-4). The loop runs at 1 kHz: the high-gain
/// adaptation law needs the faster sampling to stay well-behaved, and the
/// run stops at the first admissible-limit crossing the way a protected
/// rig would.
pub fn pendulum_mapda() -> Scenario {
    let mut s = pendulum_scenario_base();
    s.sim.t_end = 60.0;
    s.sim.t_stop = 60.0;
    s.sim.h_sample = 1e-3;
    s.sim.dt_int = 1e-4;
    s.sim.stop_at_limit = true;
    s.attack = Some(AttackSpec::MapdaRegulated {
        q: Matrix::identity(4),
        z: Matrix::identity(4).scale(10000.0),
        f_a0: Matrix::identity(4),
        aux0: Vector::constant(4, 1e-4),
    });
    s
}

/// Same scenario with the adaptation weight dropped to Z = 0.5 I: the
/// slow-adaptation case whose residual rides much closer to the
/// threshold.
pub fn pendulum_mapda_improper() -> Scenario {
    let mut s = pendulum_mapda();
    if let Some(AttackSpec::MapdaRegulated { z, .. }) = s.attack.as_mut() {
        *z = Matrix::identity(4).scale(0.5);
    }
    s
}

/// Nominal-model pole-dynamics attack on the nonlinear truth: model
/// mismatch makes the residual grow until the detector fires.
pub fn pendulum_tpda_nominal() -> Scenario {
    let mut s = pendulum_scenario_base();
    s.sim.h_sample = 1e-3;
    s.sim.dt_int = 1e-4;
    s.attack = Some(AttackSpec::TpdaNominal { aux0: Vector::constant(4, 1e-4) });
    s
}

/// Exact-model pole-dynamics attack on a linear plant equal to the
/// nominal model: perfectly stealthy while the true state diverges.
pub fn pendulum_tpda_exact() -> Scenario {
    let mut s = pendulum_scenario_base();
    s.plant = pendulum_linear_plant();
    s.noise.sigma_meas = 0.0;
    let nm = pendulum_nominal();
    s.attack = Some(AttackSpec::TpdaExact { a: nm.a_n, aux0: Vector::constant(4, 1e-4) });
    s
}

/// Scenario resolved by preset name (the names the command-line surface
/// accepts).
pub fn scenario_by_name(name: &str) -> Option<Scenario> {
    match name {
        "pendulum-attack-free" => Some(pendulum_attack_free()),
        "pendulum-mapda" => Some(pendulum_mapda()),
        "pendulum-mapda-improper" => Some(pendulum_mapda_improper()),
        "pendulum-tpda-nominal" => Some(pendulum_tpda_nominal()),
        "pendulum-tpda-exact" => Some(pendulum_tpda_exact()),
        _ => None,
    }
}

pub const PRESET_NAMES: &[&str] = &[
    "pendulum-attack-free",
    "pendulum-mapda",
    "pendulum-mapda-improper",
    "pendulum-tpda-nominal",
    "pendulum-tpda-exact",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::eig;

    #[test]
    fn nominal_closed_loop_is_hurwitz_with_margin() {
        let nm = pendulum_nominal();
        let spec = eig(&nm.phi_n).unwrap();
        assert!(spec.max_real_part() < -0.4, "slowest mode {:?}", spec.entries);
    }

    #[test]
    fn preset_matrices_digit_for_digit() {
        let nm = pendulum_nominal();
        let a_expect: [[f64; 4]; 4] = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 29.4311, 0.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(nm.a_n[(i, j)], a_expect[i][j]);
            }
        }
        for (i, v) in [0.0, 0.0, 1.0, 3.0001].iter().enumerate() {
            assert_eq!(nm.b_n[(i, 0)], *v);
        }
        for (j, v) in [3.7569, -29.6225, 4.0648, -5.4563].iter().enumerate() {
            assert_eq!(nm.k_n[(0, j)], *v);
        }
        let lim = pendulum_limits();
        assert_eq!((lim[0], lim[1]), (0.3, 0.8));
    }

    #[test]
    fn jordan_decomposition_consistent() {
        let nm = pendulum_nominal();
        let (x_n, j_n) = pendulum_jordan();
        let resid = (&(&nm.a_n * &x_n) - &(&x_n * &j_n)).frobenius_norm();
        // the reference decomposition is rounded to ~5 digits
        assert!(resid < 1e-3, "residual {resid}");
    }

    #[test]
    fn every_preset_builds() {
        for name in PRESET_NAMES {
            let s = scenario_by_name(name).unwrap();
            s.sim.validate().unwrap();
            s.build_engine().unwrap();
        }
        assert!(scenario_by_name("nope").is_none());
    }
}
