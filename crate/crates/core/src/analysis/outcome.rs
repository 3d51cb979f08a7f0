use crate::error::{Error, Result};
use crate::sim::{DetectorConfig, SimConfig, SimTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Stealthy over the whole attack window and destructive.
    Ideal,
    /// Stealthy, not destructive, but the output was driven close to the
    /// admissible limit (80% by default).
    QuasiIdeal,
    /// The detector fired inside the attack window.
    Detected,
    Ineffective,
}

/// Position of the residual supremum relative to the threshold for
/// adaptive attacks: the residual climbs past the threshold (Climbing),
/// peaks at it (Peak, within a 1% band), or stays below it and descends
/// (Descending).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapdaType {
    Climbing,
    Peak,
    Descending,
}

/// Fraction of the admissible limit that counts as "driven very close"
/// for the quasi-ideal verdict.
pub const QUASI_IDEAL_FRACTION: f64 = 0.8;

/// Relative band around the threshold for the Peak label.
pub const PEAK_BAND: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub stealthy_over_window: bool,
    pub detection_time: Option<f64>,
    pub limit_cross_time: Option<f64>,
    pub destructive: bool,
    pub classification: Classification,
    pub mapda_type: Option<MapdaType>,
    pub sup_residual: f64,
}

/// Stealthiness/destructiveness verdicts for a recorded run.
///
/// Detection scans samples inside the attack window; the destructiveness
/// verdict is taken at the window end or wherever the run stopped
/// (divergence sentinel or limit stop), whichever comes first.
pub fn evaluate_outcome(
    trace: &SimTrace,
    det: &DetectorConfig,
    sim: &SimConfig,
) -> Result<Outcome> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let tol = 1e-6 * sim.h_sample;
    let in_window =
        |t: f64| t >= sim.t_start - tol && t <= sim.t_stop + tol;

    let mut detection_time = None;
    let mut sup_residual: f64 = 0.0;
    let mut limit_cross_time = None;
    let mut near_limit: f64 = 0.0;
    let mut last_window_idx = None;

    for k in 0..trace.len() {
        let t = trace.times[k];
        let z = &trace.z[k];
        let crossed = (0..z.dim()).any(|j| z[j].abs() >= sim.limits[j]);
        if crossed && limit_cross_time.is_none() {
            limit_cross_time = Some(t);
        }
        if in_window(t) {
            last_window_idx = Some(k);
            sup_residual = sup_residual.max(trace.residual_norm[k]);
            if detection_time.is_none() && trace.residual_norm[k] >= det.epsilon {
                detection_time = Some(t);
            }
            let frac = (0..z.dim())
                .map(|j| z[j].abs() / sim.limits[j])
                .fold(0.0, f64::max);
            near_limit = near_limit.max(frac);
        }
    }

    let destructive = match last_window_idx {
        Some(k) => {
            let z = &trace.z[k];
            (0..z.dim()).any(|j| z[j].abs() >= sim.limits[j])
        }
        None => false,
    };

    let stealthy_over_window = detection_time.is_none();
    let classification = if detection_time.is_some() {
        Classification::Detected
    } else if destructive {
        Classification::Ideal
    } else if near_limit >= QUASI_IDEAL_FRACTION {
        Classification::QuasiIdeal
    } else {
        Classification::Ineffective
    };

    let mapda_type = match trace.attack_variant {
        Some(v) if v.is_adaptive() => Some(classify_mapda_type(sup_residual, det.epsilon)),
        _ => None,
    };

    Ok(Outcome {
        stealthy_over_window,
        detection_time,
        limit_cross_time,
        destructive,
        classification,
        mapda_type,
        sup_residual,
    })
}

fn classify_mapda_type(sup_residual: f64, epsilon: f64) -> MapdaType {
    if (sup_residual - epsilon).abs() <= PEAK_BAND * epsilon {
        MapdaType::Peak
    } else if sup_residual > epsilon {
        MapdaType::Climbing
    } else {
        MapdaType::Descending
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::AttackVariant;
    use crate::numkit::Vector;

    fn mk_trace(times: Vec<f64>, residuals: Vec<f64>, z: Vec<Vec<f64>>) -> SimTrace {
        let n = times.len();
        SimTrace {
            times,
            x: vec![Vector::zeros(4); n],
            a: vec![Vector::zeros(4); n],
            x_a: residuals
                .iter()
                .map(|&r| {
                    let mut v = Vector::zeros(4);
                    v[0] = r;
                    v
                })
                .collect(),
            u: vec![Vector::zeros(1); n],
            z: z.into_iter().map(|v| Vector::from_vec(v).unwrap()).collect(),
            residual_norm: residuals.clone(),
            alarm: residuals.iter().map(|&r| r >= 3.1).collect(),
            diverged: false,
            diverge_time: None,
            attack_variant: Some(AttackVariant::MapdaRegulated),
            adaptive_gain: None,
        }
    }

    fn cfg() -> (DetectorConfig, SimConfig) {
        (
            DetectorConfig { epsilon: 3.1, settle_time: 0.0 },
            SimConfig {
                t_end: 3.0,
                dt_int: 1e-3,
                h_sample: 1.0,
                t_start: 0.0,
                t_stop: 3.0,
                x0: Vector::zeros(4),
                limits: Vector::from_slice(&[0.3, 0.8]).unwrap(),
                stop_at_limit: false,
            },
        )
    }

    #[test]
    fn all_zero_is_ineffective() {
        let trace = mk_trace(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0; 4],
            vec![vec![0.0, 0.0]; 4],
        );
        let (det, sim) = cfg();
        let o = evaluate_outcome(&trace, &det, &sim).unwrap();
        assert!(o.stealthy_over_window);
        assert!(!o.destructive);
        assert_eq!(o.classification, Classification::Ineffective);
        assert_eq!(o.mapda_type, Some(MapdaType::Descending));
    }

    #[test]
    fn stealthy_crossing_is_ideal() {
        let trace = mk_trace(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.5, 1.0, 1.5, 2.0],
            vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![0.2, 0.0], vec![0.35, 0.0]],
        );
        let (det, sim) = cfg();
        let o = evaluate_outcome(&trace, &det, &sim).unwrap();
        assert!(o.stealthy_over_window);
        assert!(o.destructive);
        assert_eq!(o.limit_cross_time, Some(3.0));
        assert_eq!(o.classification, Classification::Ideal);
    }

    #[test]
    fn detection_dominates() {
        let trace = mk_trace(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.5, 3.2, 4.0, 5.0],
            vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![0.5, 0.9], vec![0.6, 1.0]],
        );
        let (det, sim) = cfg();
        let o = evaluate_outcome(&trace, &det, &sim).unwrap();
        assert_eq!(o.detection_time, Some(1.0));
        assert!(!o.stealthy_over_window);
        assert!(o.destructive);
        assert_eq!(o.classification, Classification::Detected);
        assert_eq!(o.mapda_type, Some(MapdaType::Climbing));
    }

    #[test]
    fn quasi_ideal_band() {
        let trace = mk_trace(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.5, 1.0, 1.0, 0.5],
            vec![vec![0.0, 0.0], vec![0.25, 0.0], vec![0.2, 0.0], vec![0.1, 0.0]],
        );
        let (det, sim) = cfg();
        let o = evaluate_outcome(&trace, &det, &sim).unwrap();
        // |z1| reached 0.25 = 83% of the 0.3 limit
        assert_eq!(o.classification, Classification::QuasiIdeal);
    }

    #[test]
    fn detection_absent_means_residual_below_eps() {
        let trace = mk_trace(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![3.0, 3.08, 2.0, 1.0],
            vec![vec![0.0, 0.0]; 4],
        );
        let (det, sim) = cfg();
        let o = evaluate_outcome(&trace, &det, &sim).unwrap();
        assert!(o.detection_time.is_none());
        // re-scan: every window sample is strictly below epsilon
        assert!(trace.residual_norm.iter().all(|&r| r < det.epsilon));
        assert!((o.sup_residual - 3.08).abs() < 1e-12);
        assert_eq!(o.mapda_type, Some(MapdaType::Peak));
    }

    #[test]
    fn empty_trace_rejected() {
        let trace = mk_trace(vec![], vec![], vec![]);
        let (det, sim) = cfg();
        assert_eq!(evaluate_outcome(&trace, &det, &sim).unwrap_err(), Error::EmptyTrace);
    }
}
