//! Seeded random matrix ensembles.
//!
//! Every trial draws from its own ChaCha8 stream seeded by
//! `splitmix64(seed ^ trial)`, so a trial's sample does not depend on which
//! other trials ran before it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectral::{hermitian_eig, ComplexMatrix, HermitianMatrix, EIG_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// `(G + G*) / 2` with i.i.d. standard complex normal `G`.
    GaussianHermitian,
    /// `X` diagonal with spectrum spread over `[-1, 1]`, `Y = X + c vv*`;
    /// the spectra interlace and straddle the kink of `abs` at 0.
    DiagonalCrossing,
    /// `X` Gaussian Hermitian, `Y = X + Σ_r s w_r w_r*`.
    LowRankPerturbation,
}

pub const ENSEMBLE_NAMES: &[&str] = &["gaussian_hermitian", "diagonal_crossing", "low_rank_perturbation"];

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::GaussianHermitian => "gaussian_hermitian",
            EnsembleKind::DiagonalCrossing => "diagonal_crossing",
            EnsembleKind::LowRankPerturbation => "low_rank_perturbation",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian_hermitian" => Ok(EnsembleKind::GaussianHermitian),
            "diagonal_crossing" => Ok(EnsembleKind::DiagonalCrossing),
            "low_rank_perturbation" => Ok(EnsembleKind::LowRankPerturbation),
            other => Err(Error::UnknownEnsemble(other.to_string())),
        }
    }
}

/// Ensemble parameters. `params` is kind-specific:
/// `diagonal_crossing` takes `[c]` (default `0.5`),
/// `low_rank_perturbation` takes `[rank, s]` (defaults `1`, `1`);
/// `gaussian_hermitian` takes none.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
    pub params: Vec<f64>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        Self {
            kind,
            dim,
            seed,
            params: Vec::new(),
        }
    }

    pub fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    fn param(&self, i: usize, default: f64) -> f64 {
        self.params.get(i).copied().unwrap_or(default)
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("ensemble dimension must be positive".into()));
        }
        if self.kind == EnsembleKind::LowRankPerturbation {
            let r = self.param(0, 1.0);
            if !(r >= 1.0 && r.fract() == 0.0) {
                return Err(Error::InvalidParameter(format!("perturbation rank must be a positive integer, got {r}")));
            }
            if r as usize >= self.dim {
                return Err(Error::InvalidParameter(format!(
                    "perturbation rank {r} must be below the dimension {}",
                    self.dim
                )));
            }
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The generator of one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ trial as u64))
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `(G + G*) / 2` with `E|G_ij|² = 1`.
pub fn gaussian_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| complex_normal(rng));
    HermitianMatrix::symmetrized((&g + &g.adjoint()).scale_real(0.5))
}

/// Uniformly random unit vector in `C^n`.
pub fn unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn rank_one(v: &[Complex64], s: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj() * s)
}

/// Haar-distributed unitary from the eigenvectors of a Gaussian Hermitian
/// matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(&gaussian_hermitian(n, rng), EIG_TOL)?.vectors().clone())
}

/// One draw `(X, Y)` of the ensemble for trial `trial`. For
/// `gaussian_hermitian` the two matrices are independent.
pub fn sample_pair(spec: &EnsembleSpec, trial: usize) -> Result<(HermitianMatrix, HermitianMatrix)> {
    spec.validate()?;
    let n = spec.dim;
    let mut rng = trial_rng(spec.seed, trial);
    match spec.kind {
        EnsembleKind::GaussianHermitian => {
            let x = gaussian_hermitian(n, &mut rng);
            let y = gaussian_hermitian(n, &mut rng);
            Ok((x, y))
        }
        EnsembleKind::DiagonalCrossing => {
            let c = spec.param(0, 0.5);
            let step = if n > 1 { 2.0 / (n - 1) as f64 } else { 0.0 };
            let spectrum: Vec<f64> = (0..n)
                .map(|j| -1.0 + j as f64 * step + rng.random_range(-0.25..0.25) * step)
                .collect();
            let x = HermitianMatrix::diag(&spectrum);
            let v = unit_vector(n, &mut rng);
            let y = HermitianMatrix::symmetrized(x.as_matrix() + &rank_one(&v, c));
            Ok((x, y))
        }
        EnsembleKind::LowRankPerturbation => {
            let r = spec.param(0, 1.0) as usize;
            let s = spec.param(1, 1.0);
            let x = gaussian_hermitian(n, &mut rng);
            let mut bump = ComplexMatrix::zeros(n);
            for _ in 0..r {
                bump = &bump + &rank_one(&unit_vector(n, &mut rng), s);
            }
            let y = HermitianMatrix::symmetrized(x.as_matrix() + &bump);
            Ok((x, y))
        }
    }
}

/// Trials `0..count` of [`sample_pair`].
pub fn sample_ensemble(spec: &EnsembleSpec, count: usize) -> Result<Vec<(HermitianMatrix, HermitianMatrix)>> {
    spec.validate()?;
    (0..count).map(|t| sample_pair(spec, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigenvalues;

    #[test]
    fn empty_and_deterministic() {
        let spec = EnsembleSpec::new(EnsembleKind::GaussianHermitian, 6, 9);
        assert!(sample_ensemble(&spec, 0).unwrap().is_empty());
        let a = sample_ensemble(&spec, 3).unwrap();
        let b = sample_ensemble(&spec, 3).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.0.as_matrix().as_slice(), q.0.as_matrix().as_slice());
            assert_eq!(p.1.as_matrix().as_slice(), q.1.as_matrix().as_slice());
        }
        // a trial does not depend on the ones before it
        let single = sample_pair(&spec, 2).unwrap();
        assert_eq!(single.0.as_matrix().as_slice(), a[2].0.as_matrix().as_slice());
    }

    #[test]
    fn trace_mean_within_clt_band() {
        let n = 8;
        let spec = EnsembleSpec::new(EnsembleKind::GaussianHermitian, n, 1);
        let draws = 10_000;
        let mut sum = 0.0;
        for t in 0..draws {
            let mut rng = trial_rng(spec.seed, t);
            sum += gaussian_hermitian(n, &mut rng).as_matrix().trace().re;
        }
        // diagonal entries are N(0, 1/2)
        let sigma = (n as f64 / 2.0 / draws as f64).sqrt();
        assert!((sum / draws as f64).abs() <= 3.0 * sigma);
    }

    #[test]
    fn crossing_spectra_interlace() {
        let spec = EnsembleSpec::new(EnsembleKind::DiagonalCrossing, 12, 4);
        let (x, y) = sample_pair(&spec, 0).unwrap();
        let ex = eigenvalues(&x).unwrap();
        let ey = eigenvalues(&y).unwrap();
        // positive rank-one bump: λ_i(X) ≤ λ_i(Y) ≤ λ_{i+1}(X)
        for i in 0..12 {
            assert!(ey[i] >= ex[i] - 1e-12);
            if i + 1 < 12 {
                assert!(ey[i] <= ex[i + 1] + 1e-12);
            }
        }
        assert!(ex[0] < 0.0 && ex[11] > 0.0);
    }

    #[test]
    fn low_rank_bump_has_rank_r() {
        let spec = EnsembleSpec::new(EnsembleKind::LowRankPerturbation, 10, 3).with_params(vec![2.0, 0.7]);
        let (x, y) = sample_pair(&spec, 5).unwrap();
        let d = HermitianMatrix::symmetrized(y.as_matrix() - x.as_matrix());
        let ev = eigenvalues(&d).unwrap();
        assert_eq!(ev.iter().filter(|v| v.abs() > 1e-10).count(), 2);
        let bad = EnsembleSpec::new(EnsembleKind::LowRankPerturbation, 3, 3).with_params(vec![3.0]);
        assert!(sample_pair(&bad, 0).is_err());
        assert!(matches!("gue".parse::<EnsembleKind>(), Err(Error::UnknownEnsemble(_))));
        for name in ENSEMBLE_NAMES {
            assert_eq!(name.parse::<EnsembleKind>().unwrap().name(), *name);
        }
    }
}
