use crate::error::{Error, Result};
use crate::numkit::eig::{eig, sym_eigenvalues};
use crate::numkit::lu::lu_solve_vec;
use crate::numkit::{Matrix, Vector};

/// Strict Hurwitz margin: every eigenvalue real part must be below this.
pub const HURWITZ_MARGIN: f64 = -1e-9;

/// Solve the continuous Lyapunov equation Phi^T P + P Phi = -Q for
/// symmetric positive definite Q and strictly Hurwitz Phi, via the
/// Kronecker-vectorized linear system
/// (I (x) Phi^T + Phi^T (x) I) vec(P) = -vec(Q).
///
/// The unknown count is n^2 <= 256, so dense LU is plenty. The output is
/// exactly symmetric (symmetrized before returning).
pub fn solve_lyapunov(phi: &Matrix, q: &Matrix) -> Result<Matrix> {
    if !phi.is_square() || !q.is_square() || phi.rows() != q.rows() {
        return Err(Error::DimensionMismatch("solve_lyapunov shapes".into()));
    }
    if q.symmetry_defect() > 1e-10 * q.frobenius_norm() {
        return Err(Error::AsymmetricQ);
    }
    let spectrum = eig(phi)?;
    if spectrum.max_real_part() >= HURWITZ_MARGIN {
        return Err(Error::NotHurwitz);
    }

    let n = phi.rows();
    let phi_t = phi.transpose();
    let id = Matrix::identity(n);
    let system = &id.kron(&phi_t) + &phi_t.kron(&id);

    // column-major vec of -Q
    let mut rhs = Vector::zeros(n * n);
    for j in 0..n {
        for i in 0..n {
            rhs[j * n + i] = -q[(i, j)];
        }
    }
    let sol = lu_solve_vec(&system, &rhs)?;
    let mut p = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            p[(i, j)] = sol[j * n + i];
        }
    }
    Ok(p.symmetrized())
}

/// Residual ||Phi^T P + P Phi + Q||_F, for verifying solutions.
pub fn lyapunov_residual(phi: &Matrix, p: &Matrix, q: &Matrix) -> f64 {
    let phi_t = phi.transpose();
    (&(&(&phi_t * p) + &(p * phi)) + q).frobenius_norm()
}

/// Positive definiteness of a symmetric matrix: all eigenvalues above
/// 1e-12 * ||M||_F. Symmetry must hold within 1e-10 relative.
pub fn is_positive_definite(m: &Matrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("is_positive_definite requires square".into()));
    }
    if m.symmetry_defect() > 1e-10 * m.frobenius_norm().max(1e-300) {
        return Err(Error::Asymmetric("is_positive_definite input".into()));
    }
    let eigs = sym_eigenvalues(m)?;
    let floor = 1e-12 * m.frobenius_norm();
    Ok(eigs.iter().all(|&l| l > floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_case() {
        // Phi = -I, Q = 2I  =>  P = I
        let p = solve_lyapunov(&Matrix::identity(4).scale(-1.0), &Matrix::identity(4).scale(2.0))
            .unwrap();
        assert!((&p - &Matrix::identity(4)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn residual_on_random_hurwitz() {
        // diagonally dominant stable matrix
        let phi = Matrix::from_rows(&[
            vec![-3.0, 0.5, 0.2],
            vec![0.1, -2.0, -0.4],
            vec![-0.3, 0.2, -1.5],
        ])
        .unwrap();
        let q = Matrix::from_rows(&[
            vec![2.0, 0.3, 0.0],
            vec![0.3, 1.5, -0.2],
            vec![0.0, -0.2, 1.0],
        ])
        .unwrap();
        let p = solve_lyapunov(&phi, &q).unwrap();
        assert!(lyapunov_residual(&phi, &p, &q) <= 1e-8 * q.frobenius_norm());
        assert_eq!(p.symmetry_defect(), 0.0);
        assert!(is_positive_definite(&p).unwrap());
    }

    #[test]
    fn rejects_non_hurwitz() {
        let phi = Matrix::diag(&[-1.0, 0.0]);
        assert_eq!(
            solve_lyapunov(&phi, &Matrix::identity(2)).unwrap_err(),
            Error::NotHurwitz
        );
    }

    #[test]
    fn rejects_asymmetric_q() {
        let phi = Matrix::diag(&[-1.0, -2.0]);
        let q = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert_eq!(solve_lyapunov(&phi, &q).unwrap_err(), Error::AsymmetricQ);
    }

    #[test]
    fn definiteness_basics() {
        assert!(is_positive_definite(&Matrix::identity(3)).unwrap());
        assert!(!is_positive_definite(&Matrix::diag(&[1.0, -1.0])).unwrap());
        let skew = Matrix::from_rows(&[vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap();
        assert!(is_positive_definite(&skew).is_err());
    }
}
