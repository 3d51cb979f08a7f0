//! Dense nonsymmetric eigensolver: Householder reduction to Hessenberg
//! form followed by Francis double-shift QR iteration (the classic
//! EISPACK `orthes`/`hqr` pair), eigenvalues only. Dimension is capped —
//! this is a desk-scale solver, not a LAPACK replacement.

use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Largest dimension the solver accepts.
pub const MAX_EIG_DIM: usize = 16;

/// Eigenvalue with algebraic multiplicity. Complex eigenvalues of real
/// matrices come in conjugate pairs, each pair contributing two entries
/// (or one entry of multiplicity 2k after clustering).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Spectrum of a real matrix, sorted by descending real part (ties by
/// descending imaginary part). Nearby eigenvalues are clustered into a
/// single entry with the algebraic multiplicity of the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl ComplexSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn max_real_part(&self) -> f64 {
        self.entries.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Flattened (re, im) list with every eigenvalue repeated per its
    /// multiplicity.
    pub fn flattened(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push((e.re, e.im));
            }
        }
        out
    }
}

/// Eigenvalues of a square real matrix (dimension <= 16).
pub fn eig(m: &Matrix) -> Result<ComplexSpectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eig requires a square matrix".into()));
    }
    if m.rows() > MAX_EIG_DIM {
        return Err(Error::DimensionMismatch(format!(
            "eig dimension {} exceeds cap {}",
            m.rows(),
            MAX_EIG_DIM
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("eig input".into()));
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let raw = hqr_eigenvalues(&mut h)?;
    Ok(cluster(raw, m))
}

/// Householder similarity reduction to upper Hessenberg form, in place,
/// without accumulating the transformation.
fn hessenberg(h: &mut Matrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hsum = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = hsum.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hsum -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hsum;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hsum;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in (m + 1)..=high {
            h[(i, m - 1)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns the raw
/// eigenvalue list. Iteration budget per deflation step is bounded.
fn hqr_eigenvalues(h: &mut Matrix) -> Result<Vec<(f64, f64)>> {
    let nn = h.rows();
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    if nn == 1 {
        return Ok(vec![(h[(0, 0)], 0.0)]);
    }

    let low = 0isize;
    let mut n = nn as isize - 1;
    let eps = 2.0f64.powi(-52);
    let mut exshift = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok(vec![(0.0, 0.0); nn]);
    }

    let mut iter = 0usize;
    while n >= low {
        // find a single small subdiagonal element
        let mut l = n;
        while l > low {
            let mut s = h[(l as usize - 1, l as usize - 1)].abs() + h[(l as usize, l as usize)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l as usize, l as usize - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one real root
            let nu = n as usize;
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // a 2x2 block: real or complex pair
            let nu = n as usize;
            let w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            let pp = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            let qq = pp * pp + w;
            let mut z = qq.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            let x = h[(nu, nu)];
            if qq >= 0.0 {
                z = if pp >= 0.0 { pp + z } else { pp - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
            } else {
                d[nu - 1] = x + pp;
                d[nu] = x + pp;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet: perform a double QR sweep
            let nu = n as usize;
            let mut x = h[(nu, nu)];
            let mut y = h[(nu - 1, nu - 1)];
            let mut w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            // exceptional shifts against stagnation
            if iter == 10 {
                exshift += x;
                for i in low as usize..=nu {
                    h[(i, i)] -= x;
                }
                let s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                let mut s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low as usize..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = 0.964;
                    w = 0.964;
                }
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::ConvergenceFailure);
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                let z = h[(mu, mu)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - rr - ss;
                r = h[(mu + 2, mu + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(mu, mu - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            let mu = m as usize;
            for i in (mu + 2)..=nu {
                h[(i, i - 2)] = 0.0;
                if i > mu + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..n, columns m..n
            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            pp += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= pp * z;
                        }
                        h[(k, j)] -= pp * x;
                        h[(k + 1, j)] -= pp * y;
                    }
                    let upper = if nu < k + 3 { nu } else { k + 3 };
                    for i in 0..=upper {
                        let mut pp = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            pp += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= pp * r;
                        }
                        h[(i, k)] -= pp;
                        h[(i, k + 1)] -= pp * q;
                    }
                }
            }
        }
    }

    Ok((0..nn).map(|i| (d[i], e[i])).collect())
}

/// Group raw eigenvalues whose mutual distance is below the cluster
/// tolerance; the representative is the cluster mean (conjugate pairs
/// that collapse average to a real value).
fn cluster(mut raw: Vec<(f64, f64)>, m: &Matrix) -> ComplexSpectrum {
    let tol = 1e-6 * m.frobenius_norm().max(1.0);
    raw.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).unwrap().then(b.1.partial_cmp(&a.1).unwrap())
    });
    let mut used = vec![false; raw.len()];
    let mut entries = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![raw[i]];
        used[i] = true;
        for j in (i + 1)..raw.len() {
            if used[j] {
                continue;
            }
            let d = ((raw[i].0 - raw[j].0).powi(2) + (raw[i].1 - raw[j].1).powi(2)).sqrt();
            if d < tol {
                members.push(raw[j]);
                used[j] = true;
            }
        }
        let k = members.len() as f64;
        let re = members.iter().map(|v| v.0).sum::<f64>() / k;
        let mut im = members.iter().map(|v| v.1).sum::<f64>() / k;
        // a cluster that swallowed a conjugate pair is real
        if im.abs() < tol && members.iter().any(|v| v.1 != 0.0) {
            im = 0.0;
        }
        entries.push(SpectrumEntry { re, im, multiplicity: members.len() });
    }
    entries.sort_by(|a, b| {
        b.re.partial_cmp(&a.re).unwrap().then(b.im.partial_cmp(&a.im).unwrap())
    });
    ComplexSpectrum { entries }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Input is symmetrized first; symmetry validation is the
/// caller's concern.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("sym_eigenvalues requires square".into()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("sym_eigenvalues input".into()));
    }
    let n = m.rows();
    let mut a = m.symmetrized();
    let scale = a.frobenius_norm().max(1.0);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if (2.0 * off).sqrt() <= 1e-14 * scale {
            let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
            d.sort_by(|x, y| y.partial_cmp(x).unwrap());
            return Ok(d);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::ConvergenceFailure)
}
