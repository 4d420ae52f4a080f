//! Eigenvalues without eigenvectors: Householder reduction to a real
//! tridiagonal matrix followed by implicit QL.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

/// Reduces a Hermitian matrix to real symmetric tridiagonal form.
/// Returns `(diagonal, subdiagonal)`, the latter of length `n - 1`.
///
/// The complex subdiagonal produced by the reflections is replaced by its
/// modulus; a diagonal unitary phase change makes the two similar.
fn tridiagonalize(h: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.dim();
    let mut a = h.as_matrix().as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let norm = ((k + 1)..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[(k + 1) * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in (k + 1)..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = ((k + 1)..n).map(|i| v[i].norm_sqr()).sum();
        e[k] = norm;
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = beta * A v on the trailing block
        for i in (k + 1)..n {
            let mut s = zero;
            let row = &a[i * n..(i + 1) * n];
            for j in (k + 1)..n {
                s += row[j] * v[j];
            }
            p[i] = s * beta;
        }
        let vp: Complex64 = ((k + 1)..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = vp * (beta * 0.5);
        for i in (k + 1)..n {
            p[i] -= kk * v[i];
        }
        for i in (k + 1)..n {
            let vi = v[i];
            let pi = p[i];
            let row = &mut a[i * n..(i + 1) * n];
            for j in (k + 1)..n {
                row[j] -= vi * p[j].conj() + pi * v[j].conj();
            }
        }
        for i in (k + 1)..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    for i in 0..n {
        d[i] = a[i * n + i].re;
    }
    (d, e)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
fn tql(d: &mut [f64], sub: &[f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(sub);
    let cap = 30 * n;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > cap {
                return Err(Error::NoConvergence {
                    sweeps: iter,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let (mut d, e) = tridiagonalize(h);
    tql(&mut d, &e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}
