//! Cyclic complex Jacobi rotations for Hermitian matrices.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;

fn off_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Runs cyclic sweeps until the off-diagonal Frobenius norm drops below
/// `1e-13 * ||A||_F`. Returns the unsorted diagonal and the accumulated
/// unitary.
///
/// Pairs whose entry is exactly zero are skipped, so block-diagonal input
/// stays block-diagonal through the iteration.
pub(crate) fn jacobi(h: &HermitianMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim();
    let mut a = h.as_matrix().as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n);
    let frob = h.as_matrix().frobenius_norm();
    let target = OFF_DIAGONAL_THRESHOLD * frob;
    let zero = Complex64::new(0.0, 0.0);

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a, n);
        if off <= target || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if sweeps > 4 && app.abs() + 1e3 * mag == app.abs() && aqq.abs() + 1e3 * mag == aqq.abs() {
                    a[p * n + q] = zero;
                    a[q * n + p] = zero;
                    continue;
                }
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sign / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp_conj = phase.conj() * s;
                let cp_conj = phase.conj() * c;
                let sp = phase * s;
                let cp = phase * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * sp_conj;
                    a[k * n + q] = akp * s + akq * cp_conj;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * sp;
                    a[q * n + k] = apk * s + aqk * cp;
                }
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

                let vs = v.as_mut_slice();
                for k in 0..n {
                    let vkp = vs[k * n + p];
                    let vkq = vs[k * n + q];
                    vs[k * n + p] = vkp * c - vkq * sp_conj;
                    vs[k * n + q] = vkp * s + vkq * cp_conj;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i].re).collect(), v))
}
