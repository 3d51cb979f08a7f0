use crate::error::{Error, Result};
use crate::numkit::{is_positive_definite, lyapunov_residual, solve_lyapunov, Matrix, Vector};

/// Parameter block of an adaptive attack: design weights Q and Z, the
/// solved Lyapunov matrix P, and the initial gain/state.
#[derive(Debug, Clone)]
pub struct MapdaParams {
    pub q: Matrix,
    pub z: Matrix,
    pub p: Matrix,
    pub f_a0: Matrix,
    pub aux0: Vector,
}

impl MapdaParams {
    /// Solve -Q = Phi^T P + P Phi and validate the whole parameter set:
    /// Q, Z positive definite, Phi strictly Hurwitz, and the residual of
    /// the solved P below 1e-8 relative.
    pub fn solve(
        phi_for_lyap: &Matrix,
        q: Matrix,
        z: Matrix,
        f_a0: Matrix,
        aux0: Vector,
    ) -> Result<Self> {
        if !is_positive_definite(&q)? {
            return Err(Error::NotPositiveDefinite("Q".into()));
        }
        if !is_positive_definite(&z)? {
            return Err(Error::NotPositiveDefinite("Z".into()));
        }
        let p = solve_lyapunov(phi_for_lyap, &q)?;
        let resid = lyapunov_residual(phi_for_lyap, &p, &q);
        if resid > 1e-8 * q.frobenius_norm().max(1e-300) {
            return Err(Error::DecompositionFailed(format!(
                "Lyapunov residual {resid:.3e} above tolerance"
            )));
        }
        if !is_positive_definite(&p)? {
            return Err(Error::NotPositiveDefinite("solved P".into()));
        }
        Ok(MapdaParams { q, z, p, f_a0, aux0 })
    }
}
