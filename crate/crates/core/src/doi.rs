//! Divided differences and double operator integrals `T_ξ^{A,A}`.
//!
//! For a Hermitian `A = U diag(λ) U*` the operator
//! `T_ξ^{A,A}(V) = Σ_{i,j} ξ(λ_i, λ_j) P_i V P_j` is the Schur multiplier
//! `U (Ξ ∘ (U* V U)) U*` with `Ξ_ij = ξ(λ_i, λ_j)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funclib::LipschitzFn;
use crate::spectral::{
    apply_function, commutator, hermitian_eig, ComplexMatrix, HermitianMatrix, SpectralDecomposition, EIG_TOL,
};

/// Relative cluster tolerance: eigenvalues closer than this times the
/// spectral diameter are treated as equal.
pub const CLUSTER_REL_TOL: f64 = 1e-9;
/// Relative tolerance of the finite-dimensional commutator identity.
pub const IDENTITY_REL_TOL: f64 = 1e-9;

/// `f^{[1]}(λ, μ) = (f(λ) - f(μ)) / (λ - μ)` off the diagonal and exactly
/// `0` when `λ = μ`.
pub fn divided_difference(f: &LipschitzFn, lambda: f64, mu: f64) -> f64 {
    if lambda == mu {
        return 0.0;
    }
    (f.eval(lambda) - f.eval(mu)) / (lambda - mu)
}

/// `1e-9 * (max λ - min λ)`.
pub fn default_cluster_tol(d: &SpectralDecomposition) -> f64 {
    let ev = d.eigenvalues();
    CLUSTER_REL_TOL * (ev[ev.len() - 1] - ev[0])
}

/// Single-linkage clusters of an ascending sequence: consecutive values
/// within `tol` share a cluster. Returns the cluster index of each entry and
/// the mean of each cluster.
pub fn clusters(sorted: &[f64], tol: f64) -> (Vec<usize>, Vec<f64>) {
    let mut ids = Vec::with_capacity(sorted.len());
    let mut sums: Vec<(f64, usize)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if i == 0 || x - sorted[i - 1] > tol {
            sums.push((0.0, 0));
        }
        let last = sums.len() - 1;
        sums[last].0 += x;
        sums[last].1 += 1;
        ids.push(last);
    }
    (ids, sums.into_iter().map(|(s, c)| s / c as f64).collect())
}

/// The matrix `ξ(λ_i, λ_j)` on eigenvalue positions.
#[derive(Clone, Debug)]
pub struct SchurSymbol {
    values: ComplexMatrix,
    cluster_tol: f64,
}

impl SchurSymbol {
    /// Evaluates `xi` on cluster representatives, so the symbol is constant
    /// on blocks of (numerically) equal eigenvalues.
    pub fn from_fn(d: &SpectralDecomposition, cluster_tol: f64, xi: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        if !(cluster_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!("cluster_tol must be >= 0, got {cluster_tol}")));
        }
        let (ids, reps) = clusters(d.eigenvalues(), cluster_tol);
        let k = reps.len();
        let mut table = vec![Complex64::new(0.0, 0.0); k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = xi(reps[a], reps[b]);
            }
        }
        if let Some(z) = table.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!("symbol value {z}")));
        }
        let n = d.dim();
        let values = ComplexMatrix::from_fn(n, |i, j| table[ids[i] * k + ids[j]]);
        Ok(Self { values, cluster_tol })
    }

    /// `ξ ≡ 1`, diagonal included.
    pub fn ones(n: usize) -> Self {
        Self {
            values: ComplexMatrix::from_fn(n, |_, _| Complex64::new(1.0, 0.0)),
            cluster_tol: 0.0,
        }
    }

    pub fn values(&self) -> &ComplexMatrix {
        &self.values
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn max_abs(&self) -> f64 {
        self.values.max_abs()
    }
}

/// `ξ = f^{[1]}` with pairs inside one cluster set to `0`.
pub fn build_symbol(f: &LipschitzFn, d: &SpectralDecomposition, cluster_tol: f64) -> Result<SchurSymbol> {
    SchurSymbol::from_fn(d, cluster_tol, |l, m| Complex64::new(divided_difference(f, l, m), 0.0))
}

/// The step symbol `ξ_n(λ, μ) = f^{[1]}(⌊nλ⌋/n, ⌊nμ⌋/n)`.
pub fn step_symbol(f: &LipschitzFn, d: &SpectralDecomposition, n: u32, cluster_tol: f64) -> Result<SchurSymbol> {
    if n == 0 {
        return Err(Error::InvalidParameter("discretization level must be >= 1".into()));
    }
    let q = |x: f64| (n as f64 * x).floor() / n as f64;
    SchurSymbol::from_fn(d, cluster_tol, |l, m| Complex64::new(divided_difference(f, q(l), q(m)), 0.0))
}

/// `U (Ξ ∘ (U* V U)) U*`.
pub fn doi_apply(d: &SpectralDecomposition, s: &SchurSymbol, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            found: v.dim(),
        });
    }
    if s.values.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            found: s.values.dim(),
        });
    }
    let inner = d.to_eigenbasis(v).hadamard(&s.values)?;
    Ok(d.from_eigenbasis(&inner))
}

/// `1e-9 * (1 + L)(1 + ||A||_F)(1 + ||B||_F)`.
pub fn identity_tolerance(f: &LipschitzFn, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    IDENTITY_REL_TOL * (1.0 + f.lipschitz_constant()) * (1.0 + a.frobenius_norm()) * (1.0 + b.frobenius_norm())
}

/// `||T_{f^{[1]}}^{A,A}([A, B]) - [f(A), B]||_F`.
pub fn commutator_identity_residual(a: &HermitianMatrix, b: &HermitianMatrix, f: &LipschitzFn) -> Result<f64> {
    let d = hermitian_eig(a, EIG_TOL)?;
    commutator_identity_residual_with(&d, a, b, f)
}

/// As [`commutator_identity_residual`] with a precomputed decomposition of `A`.
pub fn commutator_identity_residual_with(
    d: &SpectralDecomposition,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &LipschitzFn,
) -> Result<f64> {
    let ab = commutator(a.as_matrix(), b.as_matrix())?;
    let sym = build_symbol(f, d, default_cluster_tol(d))?;
    let lhs = doi_apply(d, &sym, &ab)?;
    let fa = apply_function(f, d)?;
    let rhs = commutator(fa.as_matrix(), b.as_matrix())?;
    Ok((&lhs - &rhs).frobenius_norm())
}

/// `A_n`: each eigenvalue `λ` replaced by `⌊nλ⌋/n`, same eigenvectors.
pub fn discretize_decomposition(d: &SpectralDecomposition, n: u32) -> Result<SpectralDecomposition> {
    if n == 0 {
        return Err(Error::InvalidParameter("discretization level must be >= 1".into()));
    }
    let nf = n as f64;
    let values = d.eigenvalues().iter().map(|&x| (nf * x).floor() / nf).collect();
    SpectralDecomposition::from_parts(values, d.vectors().clone())
}

pub fn discretize_spectrum(a: &HermitianMatrix, n: u32) -> Result<HermitianMatrix> {
    let d = hermitian_eig(a, EIG_TOL)?;
    let dn = discretize_decomposition(&d, n)?;
    Ok(HermitianMatrix::symmetrized(dn.reconstruct()))
}

/// `||[f(A_n), B] - [f(A), B]||_F`, the discretization error of the
/// commutator side.
pub fn discretization_error(
    d: &SpectralDecomposition,
    b: &HermitianMatrix,
    f: &LipschitzFn,
    n: u32,
) -> Result<f64> {
    let dn = discretize_decomposition(d, n)?;
    let fan = apply_function(f, &dn)?;
    let fa = apply_function(f, d)?;
    let diff = fan.as_matrix() - fa.as_matrix();
    Ok(commutator(&diff, b.as_matrix())?.frobenius_norm())
}

/// `A = diag(X, Y)` and `B = [[0, I], [I, 0]]`, so that
/// `[A, B] = [[0, X - Y], [Y - X, 0]]`.
pub fn dilation_reduce(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.dim(),
        });
    }
    let z = ComplexMatrix::zeros(n);
    let id = ComplexMatrix::identity(n);
    let a = ComplexMatrix::from_blocks(x.as_matrix(), &z, &z, y.as_matrix())?;
    let b = ComplexMatrix::from_blocks(&z, &id, &id, &z)?;
    Ok((HermitianMatrix::symmetrized(a), HermitianMatrix::symmetrized(b)))
}
