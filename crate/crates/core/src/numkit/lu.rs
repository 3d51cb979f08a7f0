use crate::error::{Error, Result};
use crate::numkit::{Matrix, Vector};

/// LU factorization with partial pivoting.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl LuFactors {
    /// Factor a square matrix. A pivot with magnitude below
    /// `1e-12 * ||M||_inf` is treated as singular.
    pub fn factor(m: &Matrix) -> Result<LuFactors> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("LU requires a square matrix".into()));
        }
        let n = m.rows();
        let tol = 1e-12 * m.inf_norm();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = lu[(k, k)].abs();
            for i in (k + 1)..n {
                let v = lu[(i, k)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = i;
                }
            }
            if pivot_val <= tol || !pivot_val.is_finite() {
                return Err(Error::SingularMatrix);
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            let inv_pivot = 1.0 / lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] * inv_pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        lu[(i, j)] -= factor * lu[(k, j)];
                    }
                }
            }
        }
        Ok(LuFactors { lu, perm, sign })
    }

    pub fn solve_vec(&self, rhs: &Vector) -> Result<Vector> {
        let n = self.lu.rows();
        if rhs.dim() != n {
            return Err(Error::DimensionMismatch("rhs length != matrix size".into()));
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = rhs[self.perm[i]];
        }
        // forward substitution (unit lower triangle)
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        // back substitution
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        Vector::from_vec(x).map_err(|_| Error::SingularMatrix)
    }

    pub fn solve_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        let n = self.lu.rows();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch("rhs rows != matrix size".into()));
        }
        let mut out = Matrix::zeros(n, rhs.cols());
        for j in 0..rhs.cols() {
            let col = self.solve_vec(&rhs.column(j))?;
            out.set_column(j, &col);
        }
        Ok(out)
    }

    pub fn determinant(&self) -> f64 {
        let n = self.lu.rows();
        (0..n).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }
}

/// Solve M X = rhs by partial-pivoting LU.
pub fn lu_solve(m: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    LuFactors::factor(m)?.solve_mat(rhs)
}

/// Convenience form for a single right-hand side.
pub fn lu_solve_vec(m: &Matrix, rhs: &Vector) -> Result<Vector> {
    LuFactors::factor(m)?.solve_vec(rhs)
}

pub fn invert(m: &Matrix) -> Result<Matrix> {
    lu_solve(m, &Matrix::identity(m.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let i4 = Matrix::identity(4);
        let b = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0], vec![4.0]]).unwrap();
        let x = lu_solve(&i4, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_system() {
        let m = Matrix::diag(&[2.0, 4.0]);
        let b = Matrix::from_rows(&[vec![2.0], vec![4.0]]).unwrap();
        let x = lu_solve(&m, &b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(lu_solve(&m, &Matrix::identity(2)).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn residual_on_random_6x6() {
        // fixed pseudo-random entries, residual checked by re-multiplication
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = Matrix::from_vec(6, 6, (0..36).map(|_| next()).collect()).unwrap();
        let b = Matrix::from_vec(6, 2, (0..12).map(|_| next()).collect()).unwrap();
        let x = lu_solve(&m, &b).unwrap();
        let r = &(&m * &x) - &b;
        assert!(r.frobenius_norm() <= 1e-10 * (1.0 + b.frobenius_norm()));
    }

    #[test]
    fn determinant_of_triangular() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 3.0]]).unwrap();
        let f = LuFactors::factor(&m).unwrap();
        assert!((f.determinant() - 6.0).abs() < 1e-12);
    }
}
