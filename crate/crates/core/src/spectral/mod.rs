//! Dense complex matrices, Hermitian eigendecomposition and the functional
//! calculus `f(A) = U f(Λ) U*`.

mod jacobi;
mod matrix;
mod tridiag;

use num_complex::Complex64;

pub use jacobi::{MAX_SWEEPS, OFF_DIAGONAL_THRESHOLD};
pub use matrix::{ComplexMatrix, HermitianMatrix, HERM_TOL};
pub use tridiag::eigenvalues;

use crate::error::{Error, Result};
use crate::funclib::LipschitzFn;

/// Default reconstruction tolerance for [`hermitian_eig`].
pub const EIG_TOL: f64 = 1e-10;
pub const UNITARITY_TOL: f64 = 1e-10;

/// `A = U diag(λ) U*` with `λ` ascending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from parts, checking unitarity and order.
    pub fn from_parts(eigenvalues: Vec<f64>, vectors: ComplexMatrix) -> Result<Self> {
        if eigenvalues.len() != vectors.dim() {
            return Err(Error::DimensionMismatch {
                expected: vectors.dim(),
                found: eigenvalues.len(),
            });
        }
        if let Some(&bad) = eigenvalues.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("eigenvalue {bad}")));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("eigenvalues must be nondecreasing".into()));
        }
        let defect = unitarity_defect(&vectors);
        if defect > UNITARITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "eigenvector matrix is not unitary (defect {defect:e})"
            )));
        }
        Ok(Self { eigenvalues, vectors })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    /// `U diag(values) U*`.
    pub fn synthesize(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let u = &self.vectors;
        let mut scaled = u.clone();
        for (k, z) in scaled.as_mut_slice().iter_mut().enumerate() {
            *z *= values[k % n];
        }
        &scaled * &u.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.synthesize(&self.eigenvalues)
    }

    /// `f(A)` for an arbitrary real rule; `name` appears in diagnostics.
    pub fn apply(&self, name: &str, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let mut values = Vec::with_capacity(self.dim());
        for &lambda in &self.eigenvalues {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::NonFiniteAtEigenvalue {
                    name: name.to_string(),
                    eigenvalue: lambda,
                });
            }
            values.push(v);
        }
        Ok(HermitianMatrix::symmetrized(self.synthesize(&values)))
    }

    /// Change of basis into the eigenbasis: `U* M U`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors.adjoint() * m) * &self.vectors
    }

    /// Inverse of [`Self::to_eigenbasis`]: `U M U*`.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors * m) * &self.vectors.adjoint()
    }
}

/// `||U*U - I||_max`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let g = &u.adjoint() * u;
    let n = u.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.get(i, j) - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Eigendecomposition by cyclic Jacobi. The result is verified: unitarity
/// within `1e-10` and `||U Λ U* - A||_F <= tol * (1 + ||A||_F)`.
pub fn hermitian_eig(a: &HermitianMatrix, tol: f64) -> Result<SpectralDecomposition> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = a.dim();
    let (diag, v) = jacobi::jacobi(a)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    let defect = unitarity_defect(&vectors);
    let d = SpectralDecomposition { eigenvalues, vectors };
    let frob = a.as_matrix().frobenius_norm();
    let residual = (&d.reconstruct() - a.as_matrix()).frobenius_norm();
    if defect > UNITARITY_TOL || residual > tol * (1.0 + frob) {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: residual.max(defect),
        });
    }
    Ok(d)
}

/// `f(A)` with the catalog function `f`.
pub fn apply_function(f: &LipschitzFn, d: &SpectralDecomposition) -> Result<HermitianMatrix> {
    d.apply(f.name(), |t| f.eval(t))
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}
