//! Matrix exponential by scaling-and-squaring with a diagonal Padé core
//! (order [9/9], scaled so the argument norm is at most 1). Accuracy is
//! far below the 1e-10 contract for the norms this toolkit sees.

use crate::error::{Error, Result};
use crate::numkit::lu::lu_solve;
use crate::numkit::Matrix;

const PADE_ORDER: usize = 9;
const SCALE_THRESHOLD: f64 = 1.0;

/// e^(M t). Fails with `Overflow` when the result leaves the comfortably
/// representable range, which callers treat as "the flow diverged".
pub fn mat_exp(m: &Matrix, t: f64) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("mat_exp requires a square matrix".into()));
    }
    if !t.is_finite() || !m.is_finite() {
        return Err(Error::NonFinite("mat_exp input".into()));
    }
    let n = m.rows();
    let a = m.scale(t);
    let norm = a.inf_norm();
    if norm == 0.0 {
        return Ok(Matrix::identity(n));
    }

    let squarings = if norm > SCALE_THRESHOLD {
        (norm / SCALE_THRESHOLD).log2().ceil() as i32
    } else {
        0
    };
    let a_scaled = a.scale(0.5f64.powi(squarings));

    // Pade coefficients c_0 = 1, c_{k+1} = c_k (m-k) / ((2m-k)(k+1))
    let mut coeff = [0.0; PADE_ORDER + 1];
    coeff[0] = 1.0;
    for k in 0..PADE_ORDER {
        coeff[k + 1] =
            coeff[k] * (PADE_ORDER - k) as f64 / (((2 * PADE_ORDER - k) * (k + 1)) as f64);
    }

    // U holds odd powers, V even powers: e^A ~ (V - U)^-1 (V + U)
    let mut u = Matrix::zeros(n, n);
    let mut v = Matrix::identity(n).scale(coeff[0]);
    let mut power = Matrix::identity(n);
    for (k, &c) in coeff.iter().enumerate().skip(1) {
        power = &power * &a_scaled;
        let term = power.scale(c);
        if k % 2 == 1 {
            u = &u + &term;
        } else {
            v = &v + &term;
        }
    }
    let mut result = lu_solve(&(&v - &u), &(&v + &u)).map_err(|e| match e {
        Error::SingularMatrix => Error::Overflow,
        other => other,
    })?;

    for _ in 0..squarings {
        result = &result * &result;
        if !result.is_finite() || result.max_abs() > 1e300 {
            return Err(Error::Overflow);
        }
    }
    if !result.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_identity() {
        let e = mat_exp(&Matrix::zeros(3, 3), 2.5).unwrap();
        assert_eq!(e, Matrix::identity(3));
    }

    #[test]
    fn diagonal_case() {
        let e = mat_exp(&Matrix::diag(&[1.0, -2.0]), 1.0).unwrap();
        assert!((e[(0, 0)] - 1.0f64.exp()).abs() < 1e-12);
        assert!((e[(1, 1)] - (-2.0f64).exp()).abs() < 1e-12);
        assert!(e[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn nilpotent_closed_form() {
        // exp([[0,1],[0,0]] t) = [[1,t],[0,1]]
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let e = mat_exp(&m, 3.0).unwrap();
        assert!((e[(0, 1)] - 3.0).abs() < 1e-12);
        assert!((e[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_block() {
        // exp([[0,-w],[w,0]] t) = [[cos wt, -sin wt],[sin wt, cos wt]]
        let m = Matrix::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]).unwrap();
        let e = mat_exp(&m, 0.7).unwrap();
        let (c, s) = ((1.4f64).cos(), (1.4f64).sin());
        assert!((e[(0, 0)] - c).abs() < 1e-12);
        assert!((e[(1, 0)] - s).abs() < 1e-12);
    }

    #[test]
    fn overflow_detected() {
        let m = Matrix::diag(&[1000.0]);
        assert_eq!(mat_exp(&m, 1000.0).unwrap_err(), Error::Overflow);
    }

    #[test]
    fn large_norm_still_accurate() {
        // ||Mt|| = 50 on a diagonal: compare against scalar exps
        let m = Matrix::diag(&[0.5, -0.5, 0.25]);
        let e = mat_exp(&m, 100.0).unwrap();
        for (i, lam) in [0.5f64, -0.5, 0.25].iter().enumerate() {
            let expect = (lam * 100.0).exp();
            assert!(((e[(i, i)] - expect) / expect).abs() < 1e-10);
        }
    }
}
