//! JSON scenario files and their resolution into runnable scenarios.
//! A file may start from a named preset and override whole sections, or
//! spell out every section itself. Unknown keys are rejected.

use serde::Deserialize;

use polesim::numkit::{Matrix, Vector};
use polesim::presets::{self, AttackSpec, Scenario};
use polesim::sim::{DetectorConfig, NoiseConfig, NominalModel, PlantModel, SimConfig};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub preset: Option<String>,
    pub plant: Option<PlantFile>,
    pub nominal: Option<NominalFile>,
    #[serde(default, deserialize_with = "deserialize_some")]
    pub attack: Option<Option<AttackFile>>,
    pub attacks: Option<Vec<AttackFile>>,
    pub sim: Option<SimFile>,
    pub noise: Option<NoiseFile>,
    pub detector: Option<DetectorFile>,
}

/// Distinguishes an absent `attack` key (keep preset) from an explicit
/// `"attack": null` (force attack-free).
fn deserialize_some<'de, T, D>(deserializer: D) -> Result<Option<Option<T>>, D::Error>
where
    T: Deserialize<'de>,
    D: serde::Deserializer<'de>,
{
    Ok(Some(Option::deserialize(deserializer)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum PlantFile {
    Linear {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        c: Vec<Vec<f64>>,
    },
    NonlinearPendulum {
        accel_gain: f64,
        gravity: f64,
        c: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NominalFile {
    pub a_n: Vec<Vec<f64>>,
    pub b_n: Vec<Vec<f64>>,
    pub k_n: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackFile {
    pub variant: String,
    pub aux0: Option<Vec<f64>>,
    pub q: Option<Vec<Vec<f64>>>,
    pub z: Option<Vec<Vec<f64>>>,
    pub f_a0: Option<Vec<Vec<f64>>>,
    pub h: Option<f64>,
    /// Exact plant matrix for exact-model and delay-induced variants.
    pub a: Option<Vec<Vec<f64>>>,
    pub b: Option<Vec<Vec<f64>>>,
    pub k: Option<Vec<Vec<f64>>>,
    pub p1: Option<Vec<Vec<f64>>>,
    pub p4: Option<Vec<Vec<f64>>>,
    /// For the ideal adaptive variant: the true closed loop.
    pub phi_true: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    pub t_end: f64,
    pub dt_int: f64,
    pub h_sample: f64,
    pub t_start: f64,
    pub t_stop: f64,
    pub x0: Vec<f64>,
    pub limits: Vec<f64>,
    #[serde(default)]
    pub stop_at_limit: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseFile {
    pub sigma_meas: f64,
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorFile {
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub settle_time: f64,
    pub calibrate: Option<CalibrateFile>,
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct CalibrateFile {
    pub n_runs: usize,
    pub settle: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckIcFile {
    pub preset: Option<String>,
    pub m: Option<Vec<Vec<f64>>>,
    pub x0: Option<Vec<f64>>,
    pub x_jordan: Option<Vec<Vec<f64>>>,
    pub j_jordan: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaFile {
    pub preset: Option<String>,
    pub a: Option<Vec<Vec<f64>>>,
    pub b: Option<Vec<Vec<f64>>>,
    pub k: Option<Vec<Vec<f64>>>,
    pub p1: Option<Vec<Vec<f64>>>,
    pub p2: Option<Vec<Vec<f64>>>,
    pub p3: Option<Vec<Vec<f64>>>,
    pub p4: Option<Vec<Vec<f64>>>,
    pub h: Option<f64>,
}

pub fn matrix_from(key: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    Matrix::from_rows(rows).map_err(|e| CliError::Config(format!("{key}: {e}")))
}

pub fn vector_from(key: &str, data: &[f64]) -> Result<Vector, CliError> {
    Vector::from_slice(data).map_err(|e| CliError::Config(format!("{key}: {e}")))
}

fn require<'a, T>(key: &str, opt: &'a Option<T>) -> Result<&'a T, CliError> {
    opt.as_ref().ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
}

impl PlantFile {
    fn resolve(&self) -> Result<PlantModel, CliError> {
        let plant = match self {
            PlantFile::Linear { a, b, c } => PlantModel::Linear {
                a: matrix_from("plant.a", a)?,
                b: matrix_from("plant.b", b)?,
                c: matrix_from("plant.c", c)?,
            },
            PlantFile::NonlinearPendulum { accel_gain, gravity, c } => {
                PlantModel::NonlinearPendulum {
                    accel_gain: *accel_gain,
                    gravity: *gravity,
                    c: matrix_from("plant.c", c)?,
                }
            }
        };
        plant.validate().map_err(|e| CliError::Config(format!("plant: {e}")))?;
        Ok(plant)
    }
}

impl NominalFile {
    fn resolve(&self) -> Result<NominalModel, CliError> {
        NominalModel::new(
            matrix_from("nominal.a_n", &self.a_n)?,
            matrix_from("nominal.b_n", &self.b_n)?,
            matrix_from("nominal.k_n", &self.k_n)?,
        )
        .map_err(|e| CliError::Config(format!("nominal: {e}")))
    }
}

impl AttackFile {
    pub fn resolve(&self, plant: &PlantModel) -> Result<AttackSpec, CliError> {
        let p = plant.state_dim();
        let aux0 = match &self.aux0 {
            Some(v) => vector_from("attack.aux0", v)?,
            None => Vector::constant(p, 1e-4),
        };
        let q = match &self.q {
            Some(m) => matrix_from("attack.q", m)?,
            None => Matrix::identity(p),
        };
        let z = match &self.z {
            Some(m) => matrix_from("attack.z", m)?,
            None => Matrix::identity(p).scale(10000.0),
        };
        let f_a0 = match &self.f_a0 {
            Some(m) => matrix_from("attack.f_a0", m)?,
            None => Matrix::identity(p),
        };
        // exact-model variants fall back to the plant's own A when linear
        let exact_a = || -> Result<Matrix, CliError> {
            if let Some(rows) = &self.a {
                return matrix_from("attack.a", rows);
            }
            match plant {
                PlantModel::Linear { a, .. } => Ok(a.clone()),
                _ => Err(CliError::Config(
                    "attack.a is required for exact-model variants on a nonlinear plant".into(),
                )),
            }
        };
        let h = self.h.unwrap_or(1e-3);
        let spec = match self.variant.as_str() {
            "tpda-exact" => AttackSpec::TpdaExact { a: exact_a()?, aux0 },
            "tpda-nominal" => AttackSpec::TpdaNominal { aux0 },
            "discrete-tpda-exact" => AttackSpec::DiscreteTpdaExact { a: exact_a()?, aux0 },
            "discrete-tpda-nominal" => AttackSpec::DiscreteTpdaNominal { aux0 },
            "mapda-ideal" => AttackSpec::MapdaIdeal {
                phi_true: matrix_from(
                    "attack.phi_true",
                    require("attack.phi_true", &self.phi_true)?,
                )?,
                q,
                z,
                f_a0,
                aux0,
            },
            "mapda-regulated" => AttackSpec::MapdaRegulated { q, z, f_a0, aux0 },
            "discrete-mapda" => AttackSpec::DiscreteMapda { q, z, f_a0, aux0, h },
            "delay-induced-discrete-mapda" => AttackSpec::DelayInducedDiscreteMapda {
                a: exact_a()?,
                b: matrix_from("attack.b", require("attack.b", &self.b)?)?,
                k_gain: matrix_from("attack.k", require("attack.k", &self.k)?)?,
                q,
                z1: z,
                p1: self.p1.as_deref().map(|m| matrix_from("attack.p1", m)).transpose()?,
                p4: self.p4.as_deref().map(|m| matrix_from("attack.p4", m)).transpose()?,
                f_a0,
                aux0,
                h,
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown attack.variant `{other}` (expected one of tpda-exact, tpda-nominal, \
                     mapda-ideal, mapda-regulated, discrete-tpda-exact, discrete-tpda-nominal, \
                     discrete-mapda, delay-induced-discrete-mapda)"
                )));
            }
        };
        Ok(spec)
    }
}

impl SimFile {
    fn resolve(&self) -> Result<SimConfig, CliError> {
        let cfg = SimConfig {
            t_end: self.t_end,
            dt_int: self.dt_int,
            h_sample: self.h_sample,
            t_start: self.t_start,
            t_stop: self.t_stop,
            x0: vector_from("sim.x0", &self.x0)?,
            limits: vector_from("sim.limits", &self.limits)?,
            stop_at_limit: self.stop_at_limit,
        };
        cfg.validate().map_err(|e| CliError::Config(format!("sim: {e}")))?;
        Ok(cfg)
    }
}

/// Detector request: a fixed threshold or a calibration directive.
#[derive(Debug, Clone, Copy)]
pub enum DetectorRequest {
    Fixed(DetectorConfig),
    Calibrate { n_runs: usize, settle: f64 },
}

impl DetectorFile {
    fn resolve(&self) -> Result<DetectorRequest, CliError> {
        match (self.epsilon, self.calibrate) {
            (Some(eps), None) => Ok(DetectorRequest::Fixed(DetectorConfig {
                epsilon: eps,
                settle_time: self.settle_time,
            })),
            (None, Some(c)) => Ok(DetectorRequest::Calibrate { n_runs: c.n_runs, settle: c.settle }),
            (Some(_), Some(_)) => Err(CliError::Config(
                "detector: give either `epsilon` or `calibrate`, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "detector: needs `epsilon` or a `calibrate` block".into(),
            )),
        }
    }
}

/// A resolved scenario plus the calibration directive (if any) and the
/// compare list.
pub struct ResolvedScenario {
    pub scenario: Scenario,
    pub detector_request: DetectorRequest,
    pub compare_attacks: Vec<AttackSpec>,
    pub label: String,
}

pub fn resolve_scenario(file: &ScenarioFile, label: &str) -> Result<ResolvedScenario, CliError> {
    let mut scenario = match &file.preset {
        Some(name) => presets::scenario_by_name(name)
            .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?,
        None => {
            let plant = require("plant", &file.plant)?.resolve()?;
            let nominal = require("nominal", &file.nominal)?.resolve()?;
            let k_gain = nominal.k_n.clone();
            let sim = require("sim", &file.sim)?.resolve()?;
            let noise = require("noise", &file.noise)?;
            Scenario {
                plant,
                nominal,
                k_gain,
                attack: None,
                sim,
                noise: NoiseConfig { sigma_meas: noise.sigma_meas, seed: noise.seed },
                detector: DetectorConfig { epsilon: 1.0, settle_time: 0.0 },
            }
        }
    };

    // overrides on top of the preset
    if file.preset.is_some() {
        if let Some(p) = &file.plant {
            scenario.plant = p.resolve()?;
        }
        if let Some(nm) = &file.nominal {
            scenario.nominal = nm.resolve()?;
            scenario.k_gain = scenario.nominal.k_n.clone();
        }
        if let Some(s) = &file.sim {
            scenario.sim = s.resolve()?;
        }
        if let Some(n) = &file.noise {
            scenario.noise = NoiseConfig { sigma_meas: n.sigma_meas, seed: n.seed };
        }
    }
    if let Some(attack_override) = &file.attack {
        scenario.attack = match attack_override {
            Some(af) => Some(af.resolve(&scenario.plant)?),
            None => None,
        };
    }

    let detector_request = match &file.detector {
        Some(df) => {
            let req = df.resolve()?;
            if let DetectorRequest::Fixed(d) = req {
                scenario.detector = d;
            }
            req
        }
        None => DetectorRequest::Fixed(scenario.detector),
    };

    let compare_attacks = match &file.attacks {
        Some(list) => list
            .iter()
            .map(|af| af.resolve(&scenario.plant))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    if scenario.sim.x0.dim() != scenario.plant.state_dim() {
        return Err(CliError::Config("sim.x0 length does not match the plant state".into()));
    }

    Ok(ResolvedScenario {
        scenario,
        detector_request,
        compare_attacks,
        label: label.to_string(),
    })
}

pub fn load_scenario_file(path: &std::path::Path) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
