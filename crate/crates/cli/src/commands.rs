use std::path::Path;

use polesim::analysis::{
    assemble_omega, calibrate_threshold, check_initial_condition, evaluate_outcome,
    omega_is_negative_definite, HalfPlane,
};
use polesim::numkit::{solve_lyapunov, Matrix, Vector};
use polesim::presets::{self, AttackSpec, Scenario};
use polesim::sim::run_closed_loop;
use polesim::Error;

use crate::config::{
    load_json, matrix_from, vector_from, CheckIcFile, DetectorRequest, OmegaFile,
    ResolvedScenario,
};
use crate::report::{
    print_header, print_outcome, write_calibration_csv, write_trace_csv,
};
use crate::CliError;

fn map_sim_error(e: Error) -> CliError {
    match e {
        Error::InvalidConfig(m) => CliError::Config(m),
        Error::DimensionMismatch(m) => CliError::Config(m),
        other => CliError::Run(other.to_string()),
    }
}

/// Resolve a calibrate-type detector request into a concrete threshold by
/// running the attack-free campaign on the same scenario.
fn settle_detector(resolved: &mut ResolvedScenario) -> Result<(), CliError> {
    if let DetectorRequest::Calibrate { n_runs, settle } = resolved.detector_request {
        let s = &resolved.scenario;
        let cal = calibrate_threshold(&s.plant, &s.k_gain, &s.sim, &s.noise, n_runs, settle)
            .map_err(map_sim_error)?;
        resolved.scenario.detector.epsilon = cal.epsilon;
        resolved.scenario.detector.settle_time = settle;
        println!(
            "calibrated epsilon = {:.6} from {} attack-free runs",
            cal.epsilon, n_runs
        );
    }
    Ok(())
}

fn run_one(
    scenario: &Scenario,
    attack: Option<&AttackSpec>,
) -> Result<(polesim::sim::SimTrace, polesim::analysis::Outcome), CliError> {
    let mut engine = match attack {
        Some(spec) => Some(spec.build(&scenario.nominal).map_err(map_sim_error)?),
        None => None,
    };
    let trace = run_closed_loop(
        &scenario.plant,
        &scenario.k_gain,
        engine.as_mut(),
        &scenario.sim,
        &scenario.noise,
        &scenario.detector,
    )
    .map_err(map_sim_error)?;
    let outcome =
        evaluate_outcome(&trace, &scenario.detector, &scenario.sim).map_err(map_sim_error)?;
    Ok((trace, outcome))
}

pub fn cmd_simulate(
    mut resolved: ResolvedScenario,
    out_dir: &Path,
    no_timestamps: bool,
) -> Result<(), CliError> {
    print_header("simulate", no_timestamps);
    settle_detector(&mut resolved)?;
    let label = resolved.label.clone();
    let attack = resolved.scenario.attack.clone();
    let (trace, outcome) = run_one(&resolved.scenario, attack.as_ref())?;

    let attack_name = attack.as_ref().map(|a| a.name()).unwrap_or("attack-free");
    let csv_name = format!("trace_{label}_{attack_name}.csv");
    let csv_path = out_dir.join(csv_name);
    write_trace_csv(&csv_path, &trace, &resolved.scenario.detector)?;

    print_outcome(
        &format!("{label} / {attack_name}"),
        &outcome,
        &trace,
        &resolved.scenario.detector,
    );
    println!("  trace_csv: {}", csv_path.display());
    Ok(())
}

pub fn cmd_calibrate(
    mut resolved: ResolvedScenario,
    n_runs_flag: Option<usize>,
    out_dir: &Path,
    no_timestamps: bool,
) -> Result<(), CliError> {
    print_header("calibrate", no_timestamps);
    let (n_runs, settle) = match (n_runs_flag, resolved.detector_request) {
        (Some(n), DetectorRequest::Calibrate { settle, .. }) => (n, settle),
        (Some(n), DetectorRequest::Fixed(d)) => (n, d.settle_time),
        (None, DetectorRequest::Calibrate { n_runs, settle }) => (n_runs, settle),
        (None, DetectorRequest::Fixed(d)) => (500, d.settle_time),
    };
    if n_runs < 2 {
        return Err(CliError::Config("calibrate needs n_runs >= 2".into()));
    }
    resolved.scenario.attack = None;
    let s = &resolved.scenario;
    let cal = calibrate_threshold(&s.plant, &s.k_gain, &s.sim, &s.noise, n_runs, settle)
        .map_err(map_sim_error)?;

    let csv_path = out_dir.join(format!("calibration_{}.csv", resolved.label));
    write_calibration_csv(&csv_path, &cal, s.noise.seed)?;

    println!("runs: {n_runs} (settle {settle} s, sigma {})", s.noise.sigma_meas);
    println!("sup_residual mean: {:.6}", cal.mean);
    println!("sup_residual std:  {:.6}", cal.std);
    println!("epsilon (mean + 3 std): {:.6}", cal.epsilon);
    println!("samples_csv: {}", csv_path.display());
    Ok(())
}

pub fn cmd_check_ic(path_or_preset: ConfigSource, no_timestamps: bool) -> Result<(), CliError> {
    print_header("check-ic", no_timestamps);
    let file: CheckIcFile = match &path_or_preset {
        ConfigSource::Path(p) => load_json(p)?,
        ConfigSource::Preset(name) => CheckIcFile {
            preset: Some(name.clone()),
            m: None,
            x0: None,
            x_jordan: None,
            j_jordan: None,
        },
    };

    let (m, x0, decomp) = if let Some(name) = &file.preset {
        if name != "pendulum" {
            return Err(CliError::Config(format!(
                "unknown check-ic preset `{name}` (only `pendulum`)"
            )));
        }
        let nm = presets::pendulum_nominal();
        let (x_n, j_n) = presets::pendulum_jordan();
        let x0 = match &file.x0 {
            Some(v) => vector_from("x0", v)?,
            None => Vector::constant(4, 1e-4),
        };
        (nm.a_n, x0, Some((x_n, j_n)))
    } else {
        let m = matrix_from(
            "m",
            file.m.as_ref().ok_or_else(|| CliError::Config("missing key `m`".into()))?,
        )?;
        let x0 = vector_from(
            "x0",
            file.x0.as_ref().ok_or_else(|| CliError::Config("missing key `x0`".into()))?,
        )?;
        let decomp = match (&file.x_jordan, &file.j_jordan) {
            (Some(x), Some(j)) => Some((matrix_from("x_jordan", x)?, matrix_from("j_jordan", j)?)),
            (None, None) => None,
            _ => {
                return Err(CliError::Config(
                    "x_jordan and j_jordan must be supplied together".into(),
                ))
            }
        };
        (m, x0, decomp)
    };

    let result = check_initial_condition(&m, &x0, decomp.as_ref().map(|(x, j)| (x, j)))
        .map_err(|e| match e {
            Error::DecompositionFailed(msg) => CliError::Decomposition(format!(
                "{msg}; supply x_jordan and j_jordan in the config"
            )),
            other => map_sim_error(other),
        })?;

    println!("eigenvalues:");
    for e in &result.eigen_report {
        println!(
            "  {:+.6}{:+.6}i  multiplicity {}  {}  {}",
            e.re,
            e.im,
            e.multiplicity,
            match e.half_plane {
                HalfPlane::OpenRight => "open-right-half-plane",
                HalfPlane::ClosedLeft => "closed-left-half-plane",
            },
            if e.defective { "defective-chain" } else { "simple" },
        );
    }
    let psi: Vec<String> = result.psi0.as_slice().iter().map(|v| format!("{v:.6e}")).collect();
    println!("psi0: [{}]", psi.join(", "));
    println!(
        "violating_indices: {:?}",
        result.violating_indices
    );
    println!(
        "verdict: initial condition {} the convergence conditions",
        if result.satisfies_lemma { "satisfies" } else { "does not satisfy" }
    );
    Ok(())
}

pub fn cmd_omega(path_or_preset: ConfigSource, no_timestamps: bool) -> Result<(), CliError> {
    print_header("omega", no_timestamps);
    let file: OmegaFile = match &path_or_preset {
        ConfigSource::Path(p) => load_json(p)?,
        ConfigSource::Preset(name) => OmegaFile {
            preset: Some(name.clone()),
            a: None,
            b: None,
            k: None,
            p1: None,
            p2: None,
            p3: None,
            p4: None,
            h: None,
        },
    };

    let (a, b, k, p1, p2, p3, p4, h) = if let Some(name) = &file.preset {
        if name != "pendulum" {
            return Err(CliError::Config(format!("unknown omega preset `{name}`")));
        }
        let nm = presets::pendulum_nominal();
        let p1 = solve_lyapunov(&nm.phi_n, &Matrix::identity(4)).map_err(map_sim_error)?;
        let over = |key: &str, opt: &Option<Vec<Vec<f64>>>, default: Matrix| match opt {
            Some(rows) => matrix_from(key, rows),
            None => Ok(default),
        };
        (
            over("a", &file.a, nm.a_n.clone())?,
            over("b", &file.b, nm.b_n.clone())?,
            over("k", &file.k, nm.k_n.clone())?,
            over("p1", &file.p1, p1)?,
            over("p2", &file.p2, Matrix::identity(4).scale(0.1))?,
            over("p3", &file.p3, Matrix::identity(4).scale(0.1))?,
            over("p4", &file.p4, Matrix::identity(4).scale(0.01))?,
            file.h.unwrap_or(1e-3),
        )
    } else {
        let need = |key: &str, opt: &Option<Vec<Vec<f64>>>| -> Result<Matrix, CliError> {
            matrix_from(
                key,
                opt.as_ref()
                    .ok_or_else(|| CliError::Config(format!("missing key `{key}`")))?,
            )
        };
        (
            need("a", &file.a)?,
            need("b", &file.b)?,
            need("k", &file.k)?,
            need("p1", &file.p1)?,
            need("p2", &file.p2)?,
            need("p3", &file.p3)?,
            need("p4", &file.p4)?,
            file.h.ok_or_else(|| CliError::Config("missing key `h`".into()))?,
        )
    };

    let omega = assemble_omega(&a, &b, &k, &p1, &p2, &p3, &p4, h).map_err(|e| match e {
        Error::Asymmetric(m) => CliError::MatrixProperty(format!("asymmetric {m}")),
        Error::NotPositiveDefinite(m) => {
            CliError::MatrixProperty(format!("{m} is not positive definite"))
        }
        other => map_sim_error(other),
    })?;
    let p = a.rows();
    println!("omega: {0}x{0} ({1} blocks of {2}x{2})", 3 * p, 9, p);
    for bi in 0..3 {
        for bj in 0..3 {
            let mut norm = 0.0f64;
            for i in 0..p {
                for j in 0..p {
                    norm += omega[(bi * p + i, bj * p + j)].powi(2);
                }
            }
            print!("  |O{}{}|_F = {:<12.6}", bi + 1, bj + 1, norm.sqrt());
        }
        println!();
    }
    let (negative_definite, lambda_max) =
        omega_is_negative_definite(&omega).map_err(|e| match e {
            Error::Asymmetric(m) => CliError::MatrixProperty(format!("asymmetric {m}")),
            other => map_sim_error(other),
        })?;
    println!("lambda_max: {lambda_max:.6e}");
    println!(
        "verdict: omega is {}negative definite",
        if negative_definite { "" } else { "NOT " }
    );
    Ok(())
}

pub fn cmd_compare(
    mut resolved: ResolvedScenario,
    out_dir: &Path,
    no_timestamps: bool,
) -> Result<(), CliError> {
    print_header("compare", no_timestamps);
    if resolved.compare_attacks.len() < 2 {
        return Err(CliError::Config(
            "compare needs an `attacks` list with at least 2 entries".into(),
        ));
    }
    settle_detector(&mut resolved)?;

    let mut rows = Vec::new();
    for (idx, spec) in resolved.compare_attacks.iter().enumerate() {
        let (trace, outcome) = run_one(&resolved.scenario, Some(spec))?;
        let csv_path =
            out_dir.join(format!("trace_{}_{}_{}.csv", resolved.label, idx, spec.name()));
        write_trace_csv(&csv_path, &trace, &resolved.scenario.detector)?;
        rows.push((spec.name().to_string(), outcome, csv_path));
    }

    println!(
        "{:<30} {:<12} {:>14} {:>17} {:>13}",
        "attack", "class", "detection_time", "limit_cross_time", "sup_residual"
    );
    for (name, outcome, _) in &rows {
        println!(
            "{:<30} {:<12} {:>14} {:>17} {:>13.6}",
            name,
            crate::report::classification_name(outcome.classification),
            outcome
                .detection_time
                .map(|t| format!("{t:.4}"))
                .unwrap_or_else(|| "none".into()),
            outcome
                .limit_cross_time
                .map(|t| format!("{t:.4}"))
                .unwrap_or_else(|| "none".into()),
            outcome.sup_residual,
        );
    }
    for (_, _, path) in &rows {
        println!("trace_csv: {}", path.display());
    }
    Ok(())
}

/// Where a command's configuration comes from.
pub enum ConfigSource {
    Path(std::path::PathBuf),
    Preset(String),
}
