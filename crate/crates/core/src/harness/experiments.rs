//! Ratio experiments for the weak-type Lipschitz estimates.

use serde::{Deserialize, Serialize};

use super::ensembles::{sample_pair, EnsembleKind, EnsembleSpec};
use crate::doi::{commutator_identity_residual, dilation_reduce, identity_tolerance};
use crate::error::{Error, Result};
use crate::funclib::LipschitzFn;
use crate::norms::{schatten_norm, weak_l1_quasinorm};
use crate::spectral::{apply_function, commutator, hermitian_eig, ComplexMatrix, HermitianMatrix, EIG_TOL};

/// `p` grid of the Schatten scaling experiment.
pub const DEFAULT_P_GRID: [f64; 7] = [1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0];

/// `lhs / rhs`, absent when `rhs = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
}

impl Ratio {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs > 0.0 { Some(lhs / rhs) } else { None };
        Self { lhs, rhs, ratio }
    }
}

/// One report row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub seed: u64,
    pub trial: usize,
    pub dim: usize,
    pub function: String,
    pub p: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
}

impl ExperimentRecord {
    pub fn new(experiment: &str, seed: u64, trial: usize, dim: usize, function: &str, p: Option<f64>, r: Ratio) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            trial,
            dim,
            function: function.to_string(),
            p,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
        }
    }
}

fn f_of(f: &LipschitzFn, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(f, &hermitian_eig(x, EIG_TOL)?)
}

/// `||[f(A), B]||_{1,∞}` against `||f'||_∞ ||[A, B]||_1`.
pub fn np_commutator_ratio(a: &HermitianMatrix, b: &HermitianMatrix, f: &LipschitzFn) -> Result<Ratio> {
    let fa = f_of(f, a)?;
    let lhs = weak_l1_quasinorm(&commutator(fa.as_matrix(), b.as_matrix())?)?;
    let rhs = f.lipschitz_constant() * schatten_norm(&commutator(a.as_matrix(), b.as_matrix())?, 1.0)?;
    Ok(Ratio::new(lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationOutcome {
    pub ratio: Ratio,
    /// The same ratio through the `2n × 2n` dilation.
    pub dilated: Ratio,
    /// `|ratio - dilated ratio|`, zero when both are absent.
    pub discrepancy: f64,
}

/// `||f(X) - f(Y)||_{1,∞}` against `||f'||_∞ ||X - Y||_1`, cross-checked
/// by [`np_commutator_ratio`] on `dilation_reduce(X, Y)`, where both sides
/// double.
pub fn np_perturbation_ratio(x: &HermitianMatrix, y: &HermitianMatrix, f: &LipschitzFn) -> Result<PerturbationOutcome> {
    let diff_f: ComplexMatrix = f_of(f, x)?.as_matrix() - f_of(f, y)?.as_matrix();
    let diff: ComplexMatrix = x.as_matrix() - y.as_matrix();
    let ratio = Ratio::new(
        weak_l1_quasinorm(&diff_f)?,
        f.lipschitz_constant() * schatten_norm(&diff, 1.0)?,
    );
    let (a, b) = dilation_reduce(x, y)?;
    let dilated = np_commutator_ratio(&a, &b, f)?;
    let discrepancy = match (ratio.ratio, dilated.ratio) {
        (Some(p), Some(q)) => (p - q).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    Ok(PerturbationOutcome {
        ratio,
        dilated,
        discrepancy,
    })
}

/// `||f(X) - f(Y)||_p` against `||X - Y||_p` for `p > 1`.
pub fn fp_ratio(x: &HermitianMatrix, y: &HermitianMatrix, f: &LipschitzFn, p: f64) -> Result<Ratio> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Schatten scaling needs 1 < p < ∞, got {p}; use the weak or trace experiments for p = 1"
        )));
    }
    let diff_f: ComplexMatrix = f_of(f, x)?.as_matrix() - f_of(f, y)?.as_matrix();
    let diff: ComplexMatrix = x.as_matrix() - y.as_matrix();
    Ok(Ratio::new(schatten_norm(&diff_f, p)?, schatten_norm(&diff, p)?))
}

/// Commutator identity residuals: `lhs` is the residual, `rhs` its
/// tolerance, one row per trial and function.
pub fn identity_suite(dim: usize, trials: usize, seed: u64, functions: &[LipschitzFn]) -> Result<Vec<ExperimentRecord>> {
    let spec = EnsembleSpec::new(EnsembleKind::GaussianHermitian, dim, seed);
    let mut out = Vec::with_capacity(trials * functions.len());
    for t in 0..trials {
        let (a, b) = sample_pair(&spec, t)?;
        for f in functions {
            let residual = commutator_identity_residual(&a, &b, f)?;
            let tol = identity_tolerance(f, a.as_matrix(), b.as_matrix());
            out.push(ExperimentRecord::new("identity-check", seed, t, dim, f.name(), None, Ratio::new(residual, tol)));
        }
    }
    Ok(out)
}

/// Commutator ratios on ensemble pairs `(A, B)`.
pub fn np_ratio_suite(spec: &EnsembleSpec, trials: usize, functions: &[LipschitzFn]) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::with_capacity(trials * functions.len());
    for t in 0..trials {
        let (a, b) = sample_pair(spec, t)?;
        for f in functions {
            let r = np_commutator_ratio(&a, &b, f)?;
            out.push(ExperimentRecord::new("np-ratio", spec.seed, t, spec.dim, f.name(), None, r));
        }
    }
    Ok(out)
}

/// Perturbation ratios with their dilation discrepancies.
pub fn perturb_suite(
    spec: &EnsembleSpec,
    trials: usize,
    functions: &[LipschitzFn],
) -> Result<Vec<(ExperimentRecord, f64)>> {
    let mut out = Vec::with_capacity(trials * functions.len());
    for t in 0..trials {
        let (x, y) = sample_pair(spec, t)?;
        for f in functions {
            let o = np_perturbation_ratio(&x, &y, f)?;
            let rec = ExperimentRecord::new("perturb-ratio", spec.seed, t, spec.dim, f.name(), None, o.ratio);
            out.push((rec, o.discrepancy));
        }
    }
    Ok(out)
}

/// Schatten-`p` ratios along `ps` for each trial.
pub fn fp_suite(spec: &EnsembleSpec, trials: usize, f: &LipschitzFn, ps: &[f64]) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::with_capacity(trials * ps.len());
    for t in 0..trials {
        let (x, y) = sample_pair(spec, t)?;
        for &p in ps {
            let r = fp_ratio(&x, &y, f, p)?;
            out.push(ExperimentRecord::new("fp-scaling", spec.seed, t, spec.dim, f.name(), Some(p), r));
        }
    }
    Ok(out)
}

/// Per dimension, the trial maximizing the trace-class ratio
/// `||f(X) - f(Y)||_1 / ||X - Y||_1` (`contrast-s1`) and the one maximizing
/// the weak ratio (`contrast-weak`): two rows per dimension.
pub fn contrast_report(
    kind: EnsembleKind,
    seed: u64,
    params: &[f64],
    f: &LipschitzFn,
    dims: &[usize],
    trials: usize,
) -> Result<Vec<ExperimentRecord>> {
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("contrast dimensions must be strictly ascending".into()));
    }
    let mut out = Vec::with_capacity(2 * dims.len());
    for &dim in dims {
        let spec = EnsembleSpec::new(kind, dim, seed).with_params(params.to_vec());
        let mut best_s1: Option<(usize, Ratio)> = None;
        let mut best_weak: Option<(usize, Ratio)> = None;
        for t in 0..trials {
            let (x, y) = sample_pair(&spec, t)?;
            let diff_f: ComplexMatrix = f_of(f, &x)?.as_matrix() - f_of(f, &y)?.as_matrix();
            let diff: ComplexMatrix = x.as_matrix() - y.as_matrix();
            let trace = schatten_norm(&diff, 1.0)?;
            let s1 = Ratio::new(schatten_norm(&diff_f, 1.0)?, trace);
            let weak = Ratio::new(weak_l1_quasinorm(&diff_f)?, trace);
            for (best, r) in [(&mut best_s1, s1), (&mut best_weak, weak)] {
                let better = match best {
                    None => true,
                    Some((_, old)) => r.ratio.unwrap_or(f64::NEG_INFINITY) > old.ratio.unwrap_or(f64::NEG_INFINITY),
                };
                if better {
                    *best = Some((t, r));
                }
            }
        }
        for (name, best) in [("contrast-s1", best_s1), ("contrast-weak", best_weak)] {
            let (t, r) = best.unwrap_or((0, Ratio::new(0.0, 0.0)));
            out.push(ExperimentRecord::new(name, seed, t, dim, f.name(), None, r));
        }
    }
    Ok(out)
}

/// Largest ratio among `records`, ignoring empty ratios.
pub fn max_ratio(records: &[ExperimentRecord]) -> Option<f64> {
    records.iter().filter_map(|r| r.ratio).reduce(f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclib::{abs, identity, pinned_piecewise, sin};

    fn pair(seed: u64, n: usize) -> (HermitianMatrix, HermitianMatrix) {
        sample_pair(&EnsembleSpec::new(EnsembleKind::GaussianHermitian, n, seed), 0).unwrap()
    }

    #[test]
    fn identity_function_ratio_at_most_one() {
        let (a, b) = pair(3, 10);
        let r = np_commutator_ratio(&a, &b, &identity()).unwrap();
        assert!(r.ratio.unwrap() <= 1.0 + 1e-9);
        let o = np_perturbation_ratio(&a, &b, &identity()).unwrap();
        assert!(o.ratio.ratio.unwrap() <= 1.0 + 1e-9);
        let fp = fp_ratio(&a, &b, &identity(), 1.5).unwrap();
        assert!((fp.ratio.unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn commuting_b_gives_empty_ratio() {
        let (a, _) = pair(4, 6);
        let id = HermitianMatrix::symmetrized(ComplexMatrix::identity(6));
        let r = np_commutator_ratio(&a, &id, &abs()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, None));
        let same = np_perturbation_ratio(&a, &a, &abs()).unwrap();
        assert_eq!(same.ratio.ratio, None);
        assert_eq!(same.discrepancy, 0.0);
    }

    #[test]
    fn monotone_region_behaves_like_identity() {
        // positive spectrum: abs acts as the identity
        let (x, _) = pair(8, 8);
        let shift = 1.0 + crate::norms::singular_values(x.as_matrix()).unwrap().get(0);
        let xp = HermitianMatrix::symmetrized(x.as_matrix() + &ComplexMatrix::identity(8).scale_real(shift));
        let yp = HermitianMatrix::symmetrized(xp.as_matrix() + &ComplexMatrix::identity(8).scale_real(1e-3));
        let o = np_perturbation_ratio(&xp, &yp, &abs()).unwrap();
        assert!(o.ratio.ratio.unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn dilation_consistency() {
        let spec = EnsembleSpec::new(EnsembleKind::GaussianHermitian, 12, 21);
        let (x, y) = sample_pair(&spec, 0).unwrap();
        for f in [abs(), pinned_piecewise(), sin()] {
            let o = np_perturbation_ratio(&x, &y, &f).unwrap();
            assert!(o.discrepancy <= 1e-9, "{}", o.discrepancy);
            assert!((o.dilated.lhs - 2.0 * o.ratio.lhs).abs() <= 1e-9 * o.ratio.lhs);
            assert!((o.dilated.rhs - 2.0 * o.ratio.rhs).abs() <= 1e-9 * o.ratio.rhs);
        }
    }

    #[test]
    fn frobenius_schur_bound() {
        let spec = EnsembleSpec::new(EnsembleKind::LowRankPerturbation, 10, 2);
        for t in 0..5 {
            let (x, y) = sample_pair(&spec, t).unwrap();
            for f in [abs(), pinned_piecewise(), sin()] {
                let r = fp_ratio(&x, &y, &f, 2.0).unwrap();
                assert!(r.ratio.unwrap() <= f.lipschitz_constant() + 1e-9);
            }
        }
        assert!(fp_ratio(&pair(1, 3).0, &pair(1, 3).1, &abs(), 1.0).is_err());
    }

    #[test]
    fn contrast_shapes() {
        let rows = contrast_report(EnsembleKind::GaussianHermitian, 7, &[], &identity(), &[2], 1).unwrap();
        assert_eq!(rows.len(), 2);
        // rank-one differences: weak and trace norms agree, so both curves are 1
        let rows = contrast_report(EnsembleKind::LowRankPerturbation, 7, &[], &identity(), &[4, 6], 3).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!((r.ratio.unwrap() - 1.0).abs() <= 1e-9, "{r:?}");
        }
        assert!(contrast_report(EnsembleKind::GaussianHermitian, 7, &[], &identity(), &[4, 2], 1).is_err());
    }
}
