//! Eigenstructure test deciding whether an unstable auxiliary model
//! started at a given initial condition nevertheless converges to zero.
//! In the (real-)Jordan basis psi = X^-1 x0, convergence requires zero
//! components for every chain of an open-right-half-plane eigenvalue and
//! zero trailing chain components for repeated closed-left-half-plane
//! eigenvalues.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numkit::{eig, lu_solve_vec, LuFactors, Matrix, Vector};

/// Accepted relative residual for a user-supplied decomposition
/// M = X J X^-1. Published decompositions are often rounded to a few
/// digits, so this is deliberately looser than machine precision.
pub const DECOMP_RESIDUAL_TOL: f64 = 1e-4;

/// Components of psi0 below this absolute value count as zero.
pub const PSI_ZERO_TOL: f64 = 1e-12;

/// Real-part margin separating the open right half-plane from the closed
/// left half-plane.
pub const HALF_PLANE_MARGIN: f64 = 1e-9;

/// Largest dimension for which the internal decomposition is attempted.
pub const INTERNAL_DECOMP_MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    OpenRight,
    ClosedLeft,
}

#[derive(Debug, Clone)]
pub struct EigenReportEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub half_plane: HalfPlane,
    pub defective: bool,
}

#[derive(Debug, Clone)]
pub struct IcCheckResult {
    pub eigen_report: Vec<EigenReportEntry>,
    pub psi0: Vector,
    pub satisfies_lemma: bool,
    pub violating_indices: Vec<usize>,
}

/// One block of the (real-)Jordan structure parsed from J.
#[derive(Debug, Clone)]
struct JordanBlock {
    start: usize,
    len: usize,
    re: f64,
    im: f64,
    /// true for a chain (superdiagonal ones), false for a diagonal or
    /// 2x2 rotation block
    chain: bool,
}

/// Decide convergence of e^(Mt) x0 from the Jordan structure of M.
///
/// When `decomposition` supplies (X, J) they are validated against M and
/// used directly; otherwise an internal decomposition is attempted for
/// dimensions up to 8 and fails with `DecompositionFailed` when the
/// matrix is defective beyond what inverse iteration can resolve.
pub fn check_initial_condition(
    m: &Matrix,
    x0: &Vector,
    decomposition: Option<(&Matrix, &Matrix)>,
) -> Result<IcCheckResult> {
    if !m.is_square() || m.rows() != x0.dim() {
        return Err(Error::DimensionMismatch("check_initial_condition shapes".into()));
    }
    let n = m.rows();
    let (x_basis, j_form) = match decomposition {
        Some((x, j)) => {
            if x.rows() != n || !x.is_square() || j.rows() != n || !j.is_square() {
                return Err(Error::DimensionMismatch("supplied X, J shapes".into()));
            }
            validate_decomposition(m, x, j)?;
            (x.clone(), j.clone())
        }
        None => internal_decomposition(m)?,
    };

    let blocks = parse_blocks(&j_form)?;
    let psi0 = lu_solve_vec(&x_basis, x0)
        .map_err(|_| Error::DecompositionFailed("X is numerically singular".into()))?;

    let mut violating = Vec::new();
    for b in &blocks {
        let unstable = b.re > HALF_PLANE_MARGIN;
        if unstable {
            // item (i): every component of an unstable block must vanish
            for i in b.start..b.start + b.len {
                if psi0[i].abs() > PSI_ZERO_TOL {
                    violating.push(i);
                }
            }
        } else if b.chain && b.len >= 2 {
            // item (ii): trailing chain components of a repeated
            // closed-left-half-plane root must vanish
            for i in (b.start + 1)..(b.start + b.len) {
                if psi0[i].abs() > PSI_ZERO_TOL {
                    violating.push(i);
                }
            }
        }
    }
    violating.sort_unstable();
    violating.dedup();

    let eigen_report = build_report(&blocks);
    Ok(IcCheckResult {
        eigen_report,
        psi0,
        satisfies_lemma: violating.is_empty(),
        violating_indices: violating,
    })
}

fn validate_decomposition(m: &Matrix, x: &Matrix, j: &Matrix) -> Result<()> {
    // residual ||M - X J X^-1||_F through the solved form M X - X J
    let lhs = m * x;
    let rhs = x * j;
    let resid = (&lhs - &rhs).frobenius_norm();
    // scale by ||M||_F * cond-ish factor: use ||M X|| as the natural scale
    let scale = m.frobenius_norm().max(1e-300) * x.frobenius_norm().max(1.0);
    if resid > DECOMP_RESIDUAL_TOL * scale {
        return Err(Error::DecompositionFailed(format!(
            "supplied X, J do not reproduce M (relative residual {:.3e})",
            resid / scale
        )));
    }
    Ok(())
}

fn parse_blocks(j: &Matrix) -> Result<Vec<JordanBlock>> {
    let n = j.rows();
    let scale = j.frobenius_norm().max(1.0);
    let tol = 1e-9 * scale;
    // off-(tri)diagonal entries must vanish
    for i in 0..n {
        for k in 0..n {
            if k + 1 < i || k > i + 1 {
                if j[(i, k)].abs() > tol {
                    return Err(Error::DecompositionFailed(
                        "J is not block bidiagonal".into(),
                    ));
                }
            }
        }
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        // 2x2 real-rotation block for a complex pair
        if i + 1 < n && j[(i + 1, i)].abs() > tol {
            let omega = j[(i, i + 1)];
            if (j[(i + 1, i)] + omega).abs() > 1e-6 * scale
                || (j[(i, i)] - j[(i + 1, i + 1)]).abs() > 1e-6 * scale
            {
                return Err(Error::DecompositionFailed(
                    "2x2 block is not a real-Jordan rotation block".into(),
                ));
            }
            blocks.push(JordanBlock {
                start: i,
                len: 2,
                re: j[(i, i)],
                im: omega.abs(),
                chain: false,
            });
            i += 2;
            continue;
        }
        // chain: consecutive equal diagonal entries linked by unit
        // superdiagonals
        let lambda = j[(i, i)];
        let mut len = 1;
        while i + len < n
            && (j[(i + len - 1, i + len)] - 1.0).abs() <= 1e-9
            && (j[(i + len, i + len)] - lambda).abs() <= 1e-6 * scale
            && (i + len == n - 1 || j[(i + len + 1, i + len)].abs() <= tol)
        {
            len += 1;
        }
        // superdiagonal entries other than the unit links must vanish
        blocks.push(JordanBlock { start: i, len, re: lambda, im: 0.0, chain: len > 1 });
        i += len;
    }
    Ok(blocks)
}

fn build_report(blocks: &[JordanBlock]) -> Vec<EigenReportEntry> {
    // aggregate equal eigenvalues across blocks
    let mut entries: Vec<EigenReportEntry> = Vec::new();
    for b in blocks {
        let (re, im) = (b.re, b.im);
        let mult = if b.im != 0.0 { 1 } else { b.len };
        let half = if re > HALF_PLANE_MARGIN { HalfPlane::OpenRight } else { HalfPlane::ClosedLeft };
        let mut merged = false;
        for e in entries.iter_mut() {
            if (e.re - re).abs() <= 1e-9 * re.abs().max(1.0) && (e.im - im).abs() <= 1e-9 {
                e.multiplicity += mult;
                e.defective |= b.chain;
                merged = true;
                break;
            }
        }
        if !merged {
            entries.push(EigenReportEntry {
                re,
                im,
                multiplicity: mult,
                half_plane: half,
                defective: b.chain,
            });
        }
        // a rotation block stands for a conjugate pair; report both halves
        if b.im != 0.0 {
            entries.push(EigenReportEntry {
                re,
                im: -im,
                multiplicity: 1,
                half_plane: half,
                defective: false,
            });
        }
    }
    entries.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap()));
    entries
}

/// Internal real-Jordan-like decomposition via eigenvalues plus inverse
/// iteration. Handles distinct real eigenvalues, complex pairs, and
/// diagonalizable repeated roots; genuinely defective matrices fail with
/// `DecompositionFailed` and the caller must supply (X, J).
fn internal_decomposition(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = m.rows();
    if n > INTERNAL_DECOMP_MAX_DIM {
        return Err(Error::DecompositionFailed(format!(
            "internal decomposition limited to dimension {INTERNAL_DECOMP_MAX_DIM}; supply X and J"
        )));
    }
    let spectrum = eig(m)?;
    let scale = m.frobenius_norm().max(1.0);
    let mut x = Matrix::zeros(n, n);
    let mut j = Matrix::zeros(n, n);
    let mut col = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c_5eed);

    for entry in &spectrum.entries {
        if entry.im.abs() > 1e-9 * scale {
            // conjugate pair: entries come re-sorted, handle the +im one
            if entry.im < 0.0 {
                continue;
            }
            if entry.multiplicity != 1 {
                return Err(Error::DecompositionFailed(
                    "repeated complex pair needs a user-supplied decomposition".into(),
                ));
            }
            let (vr, vi) = complex_eigenvector(m, entry.re, entry.im, &mut rng)?;
            if col + 2 > n {
                return Err(Error::DecompositionFailed("block overflow".into()));
            }
            x.set_column(col, &vr);
            x.set_column(col + 1, &vi);
            j[(col, col)] = entry.re;
            j[(col + 1, col + 1)] = entry.re;
            j[(col, col + 1)] = entry.im;
            j[(col + 1, col)] = -entry.im;
            col += 2;
        } else {
            // real eigenvalue, possibly repeated: try for a full
            // eigenvector basis of the cluster
            let mult = entry.multiplicity;
            let vecs = real_eigenvectors(m, entry.re, mult, &mut rng)?;
            for v in vecs {
                x.set_column(col, &v);
                j[(col, col)] = entry.re;
                col += 1;
            }
        }
    }
    if col != n {
        return Err(Error::DecompositionFailed("incomplete eigenvector basis".into()));
    }
    // consistency check with the tight internal tolerance
    let resid = (&(m * &x) - &(&x * &j)).frobenius_norm();
    if resid > 1e-6 * scale * x.frobenius_norm().max(1.0) {
        return Err(Error::DecompositionFailed(format!(
            "internal decomposition residual {resid:.3e}; matrix is likely defective, supply X and J"
        )));
    }
    Ok((x, j))
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vector {
    let mut v = Vector::zeros(n);
    for i in 0..n {
        let g: f64 = StandardNormal.sample(rng);
        v[i] = g;
    }
    v.scale(1.0 / v.norm())
}

/// Inverse iteration on (M - (lambda + delta) I).
fn real_eigenvectors(
    m: &Matrix,
    lambda: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vector>> {
    let n = m.rows();
    let scale = m.frobenius_norm().max(1.0);
    let delta = 1e-8 * scale;
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda + delta;
    }
    let factors = LuFactors::factor(&shifted)
        .map_err(|_| Error::DecompositionFailed("inverse iteration shift is singular".into()))?;

    let mut basis: Vec<Vector> = Vec::new();
    let mut attempts = 0;
    while basis.len() < count {
        attempts += 1;
        if attempts > 8 * count {
            return Err(Error::DecompositionFailed(format!(
                "eigenvalue {lambda:.6} looks defective (geometric multiplicity below {count}); supply X and J"
            )));
        }
        let mut v = random_unit(n, rng);
        for _ in 0..4 {
            v = factors.solve_vec(&v)?;
            let norm = v.norm();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::DecompositionFailed("inverse iteration collapsed".into()));
            }
            v = v.scale(1.0 / norm);
        }
        // orthogonalize within the cluster to detect deficiency
        for b in &basis {
            let proj = v.dot(b);
            v = &v - &b.scale(proj);
        }
        let rem = v.norm();
        if rem > 1e-4 {
            let v = v.scale(1.0 / rem);
            // residual check
            let planar = &m.matvec(&v) - &v.scale(lambda);
            if planar.norm() <= 1e-5 * scale {
                basis.push(v);
            }
        }
    }
    Ok(basis)
}

/// Complex eigenvector via inverse iteration on the 2n real embedding of
/// (M - (re + i*im) I) v = 0 with v = vr + i vi.
fn complex_eigenvector(
    m: &Matrix,
    re: f64,
    im: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Vector, Vector)> {
    let n = m.rows();
    let scale = m.frobenius_norm().max(1.0);
    let delta = 1e-8 * scale;
    // [[M - re I, im I], [-im I, M - re I]]
    let mut big = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            big[(i, k)] = m[(i, k)];
            big[(n + i, n + k)] = m[(i, k)];
        }
        big[(i, i)] -= re + delta;
        big[(n + i, n + i)] -= re + delta;
        big[(i, n + i)] = im;
        big[(n + i, i)] = -im;
    }
    let factors = LuFactors::factor(&big)
        .map_err(|_| Error::DecompositionFailed("complex inverse iteration singular".into()))?;
    let mut v = random_unit(2 * n, rng);
    for _ in 0..4 {
        v = factors.solve_vec(&v)?;
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DecompositionFailed("complex inverse iteration collapsed".into()));
        }
        v = v.scale(1.0 / norm);
    }
    let mut vr = Vector::zeros(n);
    let mut vi = Vector::zeros(n);
    for i in 0..n {
        vr[i] = v[i];
        vi[i] = v[n + i];
    }
    Ok((vr, vi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::mat_exp;
    use crate::presets;

    #[test]
    fn pendulum_paper_decomposition() {
        let nm = presets::pendulum_nominal();
        let (x_n, j_n) = presets::pendulum_jordan();
        let x0 = Vector::constant(4, 1e-4);
        let res = check_initial_condition(&nm.a_n, &x0, Some((&x_n, &j_n))).unwrap();
        let expect = [1.0e-4, 1.0e-4, 0.0816e-3, 0.1184e-3];
        for (i, e) in expect.iter().enumerate() {
            assert!(
                (res.psi0[i] - e).abs() <= 1e-7,
                "psi0[{i}] = {} vs {e}",
                res.psi0[i]
            );
        }
        assert!(!res.satisfies_lemma);
        // trailing chain component of the double zero root and the
        // unstable-root component are both nonzero
        assert!(res.violating_indices.contains(&1));
        assert!(res.violating_indices.contains(&3));
    }

    #[test]
    fn stable_diagonal_satisfies() {
        let m = Matrix::diag(&[-1.0, -2.0]);
        let res =
            check_initial_condition(&m, &Vector::from_slice(&[3.0, 4.0]).unwrap(), None).unwrap();
        assert!(res.satisfies_lemma);
        assert!(res.violating_indices.is_empty());
    }

    #[test]
    fn mixed_diagonal_depends_on_component() {
        let m = Matrix::diag(&[1.0, -1.0]);
        let ok =
            check_initial_condition(&m, &Vector::from_slice(&[0.0, 5.0]).unwrap(), None).unwrap();
        assert!(ok.satisfies_lemma);
        let bad =
            check_initial_condition(&m, &Vector::from_slice(&[5.0, 0.0]).unwrap(), None).unwrap();
        assert!(!bad.satisfies_lemma);
        // confirm against the flow itself
        let grow = mat_exp(&m, 10.0).unwrap().matvec(&Vector::from_slice(&[5.0, 0.0]).unwrap());
        assert!(grow.norm() > 1e3);
        let decay = mat_exp(&m, 10.0).unwrap().matvec(&Vector::from_slice(&[0.0, 5.0]).unwrap());
        assert!(decay.norm() < 1e-3);
    }

    #[test]
    fn defective_without_decomposition_fails() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let err = check_initial_condition(&m, &Vector::constant(2, 1.0), None).unwrap_err();
        assert!(matches!(err, Error::DecompositionFailed(_)));
    }

    #[test]
    fn complex_pair_internal_decomposition() {
        // damped rotation: all eigenvalues in the closed left half-plane
        let m = Matrix::from_rows(&[vec![-0.5, -2.0], vec![2.0, -0.5]]).unwrap();
        let res = check_initial_condition(&m, &Vector::constant(2, 1.0), None).unwrap();
        assert!(res.satisfies_lemma);
        // growing rotation: any nonzero initial condition violates
        let m = Matrix::from_rows(&[vec![0.5, -2.0], vec![2.0, 0.5]]).unwrap();
        let res = check_initial_condition(&m, &Vector::constant(2, 1.0), None).unwrap();
        assert!(!res.satisfies_lemma);
    }

    #[test]
    fn bad_supplied_decomposition_rejected() {
        let m = Matrix::diag(&[1.0, 2.0]);
        let x = Matrix::identity(2);
        let j = Matrix::diag(&[1.0, 5.0]); // wrong eigenvalue
        let err =
            check_initial_condition(&m, &Vector::constant(2, 1.0), Some((&x, &j))).unwrap_err();
        assert!(matches!(err, Error::DecompositionFailed(_)));
    }

    #[test]
    fn diagonalizable_repeated_root_accepted() {
        let m = Matrix::diag(&[3.0, 3.0, -1.0]);
        let res = check_initial_condition(&m, &Vector::from_slice(&[0.0, 0.0, 9.0]).unwrap(), None)
            .unwrap();
        assert!(res.satisfies_lemma);
        let res = check_initial_condition(&m, &Vector::from_slice(&[1.0, 0.0, 9.0]).unwrap(), None)
            .unwrap();
        assert!(!res.satisfies_lemma);
    }
}
