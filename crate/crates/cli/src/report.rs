//! Trace/calibration CSV writers and the plain-text run report.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use polesim::analysis::{CalibrationResult, Classification, MapdaType, Outcome};
use polesim::sim::{DetectorConfig, SimTrace};

use crate::CliError;

/// Trace CSV with 12-significant-digit values, one row per sample:
/// `t,x1..xp,a1..ap,xa1..xap,u1..um,z1..zq,res_norm,alarm`.
pub fn write_trace_csv(path: &Path, trace: &SimTrace, det: &DetectorConfig) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| CliError::Io(format!("write {}: {e}", path.display()));

    let p = trace.x.first().map(|v| v.dim()).unwrap_or(0);
    let m = trace.u.first().map(|v| v.dim()).unwrap_or(0);
    let q = trace.z.first().map(|v| v.dim()).unwrap_or(0);
    let mut header = String::from("t");
    for i in 1..=p {
        header.push_str(&format!(",x{i}"));
    }
    for i in 1..=p {
        header.push_str(&format!(",a{i}"));
    }
    for i in 1..=p {
        header.push_str(&format!(",xa{i}"));
    }
    for i in 1..=m {
        header.push_str(&format!(",u{i}"));
    }
    for i in 1..=q {
        header.push_str(&format!(",z{i}"));
    }
    header.push_str(",res_norm,alarm");
    writeln!(w, "{header}").map_err(io)?;

    for k in 0..trace.len() {
        let mut row = format!("{:.12e}", trace.times[k]);
        for v in trace.x[k].as_slice() {
            row.push_str(&format!(",{v:.12e}"));
        }
        for v in trace.a[k].as_slice() {
            row.push_str(&format!(",{v:.12e}"));
        }
        for v in trace.x_a[k].as_slice() {
            row.push_str(&format!(",{v:.12e}"));
        }
        for v in trace.u[k].as_slice() {
            row.push_str(&format!(",{v:.12e}"));
        }
        for v in trace.z[k].as_slice() {
            row.push_str(&format!(",{v:.12e}"));
        }
        let alarm = if trace.residual_norm[k] >= det.epsilon { 1 } else { 0 };
        row.push_str(&format!(",{:.12e},{alarm}", trace.residual_norm[k]));
        writeln!(w, "{row}").map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Calibration CSV: `run,seed,sup_residual`.
pub fn write_calibration_csv(
    path: &Path,
    cal: &CalibrationResult,
    base_seed: u64,
) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| CliError::Io(format!("write {}: {e}", path.display()));
    writeln!(w, "run,seed,sup_residual").map_err(io)?;
    for (i, sup) in cal.sup_samples.iter().enumerate() {
        writeln!(w, "{i},{},{sup:.12e}", base_seed.wrapping_add(i as u64)).map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::Ideal => "ideal",
        Classification::QuasiIdeal => "quasi-ideal",
        Classification::Detected => "detected",
        Classification::Ineffective => "ineffective",
    }
}

pub fn mapda_type_name(t: MapdaType) -> &'static str {
    match t {
        MapdaType::Climbing => "climbing",
        MapdaType::Peak => "peak",
        MapdaType::Descending => "descending",
    }
}

fn fmt_opt_time(t: Option<f64>) -> String {
    match t {
        Some(v) => format!("{v:.4}"),
        None => "none".into(),
    }
}

/// One human-readable outcome block.
pub fn print_outcome(label: &str, outcome: &Outcome, trace: &SimTrace, det: &DetectorConfig) {
    println!("run: {label}");
    println!(
        "  samples: {} (t = {:.4} .. {:.4} s){}",
        trace.len(),
        trace.times.first().copied().unwrap_or(0.0),
        trace.times.last().copied().unwrap_or(0.0),
        if trace.diverged {
            format!(", diverged at t = {}", fmt_opt_time(trace.diverge_time))
        } else {
            String::new()
        }
    );
    println!("  classification: {}", classification_name(outcome.classification));
    println!("  stealthy_over_window: {}", outcome.stealthy_over_window);
    println!("  detection_time: {}", fmt_opt_time(outcome.detection_time));
    println!("  limit_cross_time: {}", fmt_opt_time(outcome.limit_cross_time));
    println!("  destructive: {}", outcome.destructive);
    if let Some(t) = outcome.mapda_type {
        println!("  adaptive_residual_type: {}", mapda_type_name(t));
    }
    println!(
        "  sup_residual: {:.6} (epsilon {:.6})",
        outcome.sup_residual, det.epsilon
    );
}

/// Timestamp header unless suppressed (golden-file friendliness).
pub fn print_header(command: &str, no_timestamps: bool) {
    println!("# polesim {command}");
    if !no_timestamps {
        let unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        println!("# generated_unix: {unix}");
    }
}
