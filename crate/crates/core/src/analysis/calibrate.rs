use crate::error::{Error, Result};
use crate::numkit::Matrix;
use crate::sim::{run_closed_loop, DetectorConfig, NoiseConfig, PlantModel, SimConfig};

/// Result of an attack-free calibration campaign: per-run suprema of the
/// residual after the settle time, and the 3-sigma threshold.
#[derive(Debug, Clone)]
pub struct CalibrationResult {
    pub sup_samples: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation (not the sample estimator); at the
    /// run counts used here the difference is negligible, and the choice
    /// is fixed for reproducibility.
    pub std: f64,
    pub epsilon: f64,
}

/// Run `n_runs` attack-free simulations with seeds base_seed + i, collect
/// the supremum of ||x_a|| over t > settle for each run, and set the
/// threshold at mean + 3 std.
pub fn calibrate_threshold(
    plant: &PlantModel,
    k_gain: &Matrix,
    sim: &SimConfig,
    base_noise: &NoiseConfig,
    n_runs: usize,
    settle: f64,
) -> Result<CalibrationResult> {
    if n_runs < 2 {
        return Err(Error::InvalidConfig(
            "calibration needs n_runs >= 2 (std is undefined for a single run)".into(),
        ));
    }
    // detector config is irrelevant for attack-free statistics; a dummy
    // threshold keeps the runner interface uniform
    let det = DetectorConfig { epsilon: f64::MAX, settle_time: settle };
    let mut sup_samples = Vec::with_capacity(n_runs);
    for i in 0..n_runs {
        let noise = NoiseConfig {
            sigma_meas: base_noise.sigma_meas,
            seed: base_noise.seed.wrapping_add(i as u64),
        };
        let trace = run_closed_loop(plant, k_gain, None, sim, &noise, &det)?;
        let sup = trace
            .times
            .iter()
            .zip(&trace.residual_norm)
            .filter(|(t, _)| **t > settle)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        sup_samples.push(sup);
    }
    let n = sup_samples.len() as f64;
    let mean = sup_samples.iter().sum::<f64>() / n;
    let var = sup_samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    Ok(CalibrationResult { sup_samples, mean, std, epsilon: mean + 3.0 * std })
}
