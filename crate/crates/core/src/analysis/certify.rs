use crate::error::{Error, Result};
use crate::numkit::{invert, sym_eigenvalues, Matrix, Vector};

/// Does P certify the (possibly different) closed loop Phi_true? Returns
/// whether M = Phi_true^T P + P Phi_true is negative definite together
/// with lambda_max(M). A P solved from the nominal loop often still
/// certifies the true loop when the mismatch is small.
pub fn verify_lyapunov_certificate(phi_true: &Matrix, p: &Matrix) -> Result<(bool, f64)> {
    if !phi_true.is_square() || !p.is_square() || phi_true.rows() != p.rows() {
        return Err(Error::DimensionMismatch("verify_lyapunov_certificate shapes".into()));
    }
    if p.symmetry_defect() > 1e-10 * p.frobenius_norm().max(1e-300) {
        return Err(Error::Asymmetric("P".into()));
    }
    let m = (&(&phi_true.transpose() * p) + &(p * phi_true)).symmetrized();
    let eigs = sym_eigenvalues(&m)?;
    let lambda_max = eigs[0];
    let negative_definite = lambda_max < -1e-12 * m.frobenius_norm();
    Ok((negative_definite, lambda_max))
}

/// Lyapunov function of the adaptive attack:
/// V = x_a^T P x_a + tr(F_d^T Z^-1 F_d) with F_d = F_a + A_n - A.
/// Along the ideal adaptive law its derivative is -x_a^T Q x_a, so V is
/// non-increasing; monitoring it sample-to-sample is the numerical
/// counterpart of that argument.
pub fn mapda_lyapunov_value(
    x_a: &Vector,
    f_a: &Matrix,
    a_true: &Matrix,
    a_n: &Matrix,
    p: &Matrix,
    z: &Matrix,
) -> Result<f64> {
    let n = a_true.rows();
    if x_a.dim() != n || f_a.rows() != n || a_n.rows() != n || p.rows() != n || z.rows() != n {
        return Err(Error::DimensionMismatch("mapda_lyapunov_value shapes".into()));
    }
    let f_d = &(f_a + a_n) - a_true;
    let z_inv = invert(z)?;
    let zif = &z_inv * &f_d;
    let mut trace_term = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace_term += f_d[(i, j)] * zif[(i, j)];
        }
    }
    Ok(x_a.dot(&p.matvec(x_a)) + trace_term)
}
