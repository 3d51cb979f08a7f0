use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::attacks::AttackEngine;
use crate::error::{Error, Result};
use crate::numkit::{rk4_step, Vector};
use crate::sim::config::{DetectorConfig, NoiseConfig, SimConfig};
use crate::sim::plant::{controller_output, plant_derivative, PlantModel};
use crate::sim::trace::SimTrace;
use crate::Matrix;

/// State norm at which a run is declared divergent and stopped.
pub const DIVERGENCE_SENTINEL: f64 = 1e9;

/// Run the zero-order-hold sampled-data loop.
///
/// At every sample instant kh: read the true state and add measurement
/// noise; the attack engine (when inside its window) emits a(kh) and the
/// network output becomes x_a = x_noisy - a; the controller computes
/// u = K x_a and holds it; the plant is integrated across the sample with
/// RK4 substeps. Noise is drawn every sample regardless of the attack
/// window so a run is bitwise reproducible from (config, seed) alone and
/// an empty attack window reproduces the attack-free trace exactly.
///
/// The run stops early (with `diverged` set) when the state passes the
/// divergence sentinel, anything becomes non-finite, or the engine
/// freezes; it stops cleanly when `stop_at_limit` is set and a controlled
/// output reaches its admissible limit.
pub fn run_closed_loop(
    plant: &PlantModel,
    k_gain: &Matrix,
    mut attack: Option<&mut AttackEngine>,
    sim: &SimConfig,
    noise: &NoiseConfig,
    det: &DetectorConfig,
) -> Result<SimTrace> {
    plant.validate()?;
    sim.validate()?;
    noise.validate()?;
    det.validate()?;
    let p_dim = plant.state_dim();
    if sim.x0.dim() != p_dim {
        return Err(Error::DimensionMismatch("x0 vs plant state".into()));
    }
    if k_gain.cols() != p_dim || k_gain.rows() != plant.input_dim() {
        return Err(Error::DimensionMismatch("controller gain vs plant".into()));
    }
    let c_matrix = plant.output_matrix().clone();
    if sim.limits.dim() != c_matrix.rows() {
        return Err(Error::DimensionMismatch("limits vs output dimension".into()));
    }

    if let Some(engine) = attack.as_deref_mut() {
        if engine.output().dim() != p_dim {
            return Err(Error::DimensionMismatch("attack engine vs plant state".into()));
        }
        engine.set_integrator_step(sim.dt_int);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut draw = |dim: usize| {
        let mut v = Vector::zeros(dim);
        for i in 0..dim {
            let g: f64 = StandardNormal.sample(&mut rng);
            v[i] = noise.sigma_meas * g;
        }
        v
    };

    let n_samples = sim.sample_count();
    let substeps = sim.substeps();
    let window_tol = 1e-6 * sim.h_sample;
    let variant = attack.as_ref().map(|e| e.variant());
    let record_gain = variant.map(|v| v.is_adaptive()).unwrap_or(false);

    let mut trace = SimTrace {
        times: Vec::with_capacity(n_samples + 1),
        x: Vec::with_capacity(n_samples + 1),
        a: Vec::with_capacity(n_samples + 1),
        x_a: Vec::with_capacity(n_samples + 1),
        u: Vec::with_capacity(n_samples + 1),
        z: Vec::with_capacity(n_samples + 1),
        residual_norm: Vec::with_capacity(n_samples + 1),
        alarm: Vec::with_capacity(n_samples + 1),
        diverged: false,
        diverge_time: None,
        attack_variant: variant,
        adaptive_gain: if record_gain { Some(Vec::with_capacity(n_samples + 1)) } else { None },
    };

    let mut x = sim.x0.clone();
    'outer: for k in 0..=n_samples {
        let t = k as f64 * sim.h_sample;
        let noise_vec = draw(p_dim);
        let x_noisy = &x + &noise_vec;

        let in_window = attack.is_some()
            && t >= sim.t_start - window_tol
            && t <= sim.t_stop + window_tol;

        let a_k = if in_window {
            let engine = attack.as_deref_mut().unwrap();
            let out = engine.output();
            if !out.is_finite() || out.norm() > DIVERGENCE_SENTINEL {
                trace.diverged = true;
                trace.diverge_time = Some(t);
                break 'outer;
            }
            out
        } else {
            Vector::zeros(p_dim)
        };

        let x_a = &x_noisy - &a_k;

        let mut engine_diverged = false;
        if in_window {
            let engine = attack.as_deref_mut().unwrap();
            if record_gain {
                if let Some(gains) = trace.adaptive_gain.as_mut() {
                    gains.push(engine.adaptive_gain().cloned().unwrap_or_else(|| {
                        Matrix::zeros(p_dim, p_dim)
                    }));
                }
            }
            match engine.emit(t, &x_a, sim.h_sample) {
                Ok(_) => {}
                Err(Error::NonFiniteState) => engine_diverged = true,
                Err(e) => return Err(e),
            }
        } else if record_gain {
            if let Some(gains) = trace.adaptive_gain.as_mut() {
                let g = attack
                    .as_ref()
                    .and_then(|e| e.adaptive_gain().cloned())
                    .unwrap_or_else(|| Matrix::zeros(p_dim, p_dim));
                gains.push(g);
            }
        }

        let u = controller_output(k_gain, &x_a)?;
        let z = c_matrix.matvec(&x);
        let res = x_a.norm();

        trace.times.push(t);
        trace.x.push(x.clone());
        trace.a.push(a_k);
        trace.x_a.push(x_a);
        trace.alarm.push(res >= det.epsilon);
        trace.residual_norm.push(res);
        trace.u.push(u.clone());
        trace.z.push(z.clone());

        if engine_diverged {
            trace.diverged = true;
            trace.diverge_time = Some(t);
            break;
        }
        if sim.stop_at_limit {
            let crossed = (0..z.dim()).any(|j| z[j].abs() >= sim.limits[j]);
            if crossed {
                break;
            }
        }
        if x.norm() > DIVERGENCE_SENTINEL || !x.is_finite() {
            trace.diverged = true;
            trace.diverge_time = Some(t);
            break;
        }
        if k == n_samples {
            break;
        }

        for _ in 0..substeps {
            match rk4_step(|_, s| plant_derivative(plant, s, &u).expect("dims validated"), t, &x, sim.dt_int)
            {
                Ok(next) => x = next,
                Err(Error::NonFiniteState) => {
                    trace.diverged = true;
                    trace.diverge_time = Some(t);
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
    }

    debug_assert_eq!(trace.times.len(), trace.x_a.len());
    Ok(trace)
}
