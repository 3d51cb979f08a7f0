//! Theorem-side tooling: initial-condition convergence checks, Lyapunov
//! certificates, sampled-data stability blocks, detector calibration and
//! attack outcome classification.

mod calibrate;
mod certify;
mod ic_check;
mod omega;
mod outcome;

pub use calibrate::{calibrate_threshold, CalibrationResult};
pub use certify::{mapda_lyapunov_value, verify_lyapunov_certificate};
pub use ic_check::{
    check_initial_condition, EigenReportEntry, HalfPlane, IcCheckResult, DECOMP_RESIDUAL_TOL,
    HALF_PLANE_MARGIN, INTERNAL_DECOMP_MAX_DIM, PSI_ZERO_TOL,
};
pub use omega::{assemble_omega, omega_is_negative_definite};
pub use outcome::{
    evaluate_outcome, Classification, MapdaType, Outcome, PEAK_BAND, QUASI_IDEAL_FRACTION,
};
