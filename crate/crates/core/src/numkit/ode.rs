use crate::error::{Error, Result};
use crate::numkit::Vector;

/// One classical 4th-order Runge-Kutta step of size `dt` for y' = f(t, y).
pub fn rk4_step<F>(f: F, t: f64, y: &Vector, dt: f64) -> Result<Vector>
where
    F: Fn(f64, &Vector) -> Vector,
{
    debug_assert!(dt > 0.0, "rk4 step must be positive");
    let k1 = f(t, y);
    let k2 = f(t + dt / 2.0, &(y + &k1.scale(dt / 2.0)));
    let k3 = f(t + dt / 2.0, &(y + &k2.scale(dt / 2.0)));
    let k4 = f(t + dt, &(y + &k3.scale(dt)));

    let mut out = y.clone();
    for i in 0..y.dim() {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if !out.is_finite() {
        return Err(Error::NonFiniteState);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::expm::mat_exp;
    use crate::numkit::Matrix;

    #[test]
    fn constant_field_is_fixed_point() {
        let y = Vector::from_slice(&[1.0, -2.0]).unwrap();
        let out = rk4_step(|_, _| Vector::zeros(2), 0.0, &y, 0.1).unwrap();
        assert_eq!(out, y);
    }

    #[test]
    fn linear_step_matches_matrix_exponential() {
        // ||A|| ~ 30, dt = 1e-3, local error O(dt^5)
        let a = Matrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![-5.0, 29.0, -3.0, -8.0],
        ])
        .unwrap();
        let y = Vector::from_slice(&[0.3, -0.1, 0.2, 0.5]).unwrap();
        let dt = 1e-3;
        let stepped = rk4_step(|_, v| a.matvec(v), 0.0, &y, dt).unwrap();
        let exact = mat_exp(&a, dt).unwrap().matvec(&y);
        assert!((&stepped - &exact).norm() < 1e-12);
    }

    #[test]
    fn non_finite_detected() {
        let y = Vector::from_slice(&[1.0]).unwrap();
        let err = rk4_step(|_, v| v.scale(f64::MAX), 0.0, &y, 10.0).unwrap_err();
        assert_eq!(err, Error::NonFiniteState);
    }
}
