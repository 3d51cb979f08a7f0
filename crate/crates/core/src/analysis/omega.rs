//! Assembly and definiteness test of the 3p x 3p block matrix whose
//! negative definiteness certifies stealthiness of the delay-induced
//! adaptive attack under sampled-data (time-delay) modeling.

use crate::error::{Error, Result};
use crate::numkit::{is_positive_definite, sym_eigenvalues, Matrix};

/// Block layout (upper triangle; the lower triangle is mirrored):
///   O11 = A^T P1 + P1 A + P2 + P3 + h^2 A^T P4 A - P4
///   O12 = P1 B K + h^2 A^T P4 B K
///   O13 = P4
///   O22 = -P2 + h^2 K^T B^T P4 B K
///   O23 = 0
///   O33 = -P3 - P4
#[allow(clippy::too_many_arguments)]
pub fn assemble_omega(
    a: &Matrix,
    b: &Matrix,
    k_gain: &Matrix,
    p1: &Matrix,
    p2: &Matrix,
    p3: &Matrix,
    p4: &Matrix,
    h: f64,
) -> Result<Matrix> {
    let p = a.rows();
    if !a.is_square() || b.rows() != p || k_gain.cols() != p || k_gain.rows() != b.cols() {
        return Err(Error::DimensionMismatch("assemble_omega model shapes".into()));
    }
    for (name, m) in [("P1", p1), ("P2", p2), ("P3", p3), ("P4", p4)] {
        if m.rows() != p || !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{name} must be {p}x{p}")));
        }
        if !is_positive_definite(m)? {
            return Err(Error::NotPositiveDefinite(name.into()));
        }
    }
    if !h.is_finite() || h < 0.0 {
        return Err(Error::InvalidConfig("omega sampling period h must be >= 0".into()));
    }

    let bk = b * k_gain;
    let at = a.transpose();
    let h2 = h * h;

    let o11 = {
        let s = &at * p1; // A^T P1; symmetric part is s + s^T
        let quad = &(&at * p4) * a;
        (&(&(&(&s + &s.transpose()) + p2) + p3) + &(&quad.scale(h2) - p4)).symmetrized()
    };
    let o12 = &(p1 * &bk) + &(&(&at * p4) * &bk).scale(h2);
    let o13 = p4.clone();
    let o22 = {
        let quad = &(&bk.transpose() * p4) * &bk;
        (&quad.scale(h2) - p2).symmetrized()
    };
    let o33 = (&(-p3) - p4).symmetrized();

    let mut omega = Matrix::zeros(3 * p, 3 * p);
    let put = |omega: &mut Matrix, bi: usize, bj: usize, m: &Matrix| {
        for i in 0..p {
            for j in 0..p {
                omega[(bi * p + i, bj * p + j)] = m[(i, j)];
            }
        }
    };
    put(&mut omega, 0, 0, &o11);
    put(&mut omega, 0, 1, &o12);
    put(&mut omega, 0, 2, &o13);
    put(&mut omega, 1, 0, &o12.transpose());
    put(&mut omega, 1, 1, &o22);
    // O23 = 0
    put(&mut omega, 2, 0, &o13.transpose());
    put(&mut omega, 2, 2, &o33);
    Ok(omega)
}

/// Negative definiteness: lambda_max < -1e-12 ||Omega||_F. Returns the
/// verdict together with lambda_max.
pub fn omega_is_negative_definite(omega: &Matrix) -> Result<(bool, f64)> {
    if !omega.is_square() {
        return Err(Error::DimensionMismatch("omega must be square".into()));
    }
    if omega.symmetry_defect() > 1e-10 * omega.frobenius_norm().max(1e-300) {
        return Err(Error::Asymmetric("omega".into()));
    }
    let eigs = sym_eigenvalues(omega)?;
    let lambda_max = eigs[0];
    Ok((lambda_max < -1e-12 * omega.frobenius_norm(), lambda_max))
}
