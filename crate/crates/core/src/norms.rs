//! Singular value sequences, Schatten norms and the weak `L_{1,∞}` quasi-norm.
//!
//! Two traces are supported: the counting measure on a matrix's singular
//! values, and weighted sequences where every value carries a measure (grid
//! cell volume for discretized densities).

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{eigenvalues, ComplexMatrix, HermitianMatrix, HERM_TOL};

/// Singular values in nonincreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValueSeq {
    values: Vec<f64>,
}

impl SingularValueSeq {
    /// Sorts the input nonincreasing. Rejects negative or non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidParameter(format!("singular value {bad} is not a finite nonnegative number")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `μ_k`, zero past the end.
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    pub fn schatten(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || p.is_nan() {
            return Err(Error::InvalidParameter(format!("Schatten exponent must be >= 1, got {p}")));
        }
        let top = self.get(0);
        if top == 0.0 {
            return Ok(0.0);
        }
        if p == 1.0 {
            return Ok(self.values.iter().sum());
        }
        if p.is_infinite() {
            return Ok(top);
        }
        let s: f64 = self.values.iter().map(|v| (v / top).powf(p)).sum();
        Ok(top * s.powf(1.0 / p))
    }

    /// `max_k (k + 1) μ_k`.
    pub fn weak_l1(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (k + 1) as f64 * v)
            .fold(0.0, f64::max)
    }
}

/// Singular values of `M`. Hermitian and anti-Hermitian input use the
/// eigenvalue moduli directly; other input goes through the Hermitian
/// dilation `[[0, M], [M*, 0]]`, whose spectrum is `±σ`.
pub fn singular_values(m: &ComplexMatrix) -> Result<SingularValueSeq> {
    let n = m.dim();
    let scale = HERM_TOL * (1.0 + m.max_abs());
    let values = if m.hermitian_defect().0 <= scale {
        eigenvalues(&HermitianMatrix::symmetrized(m.clone()))?.into_iter().map(f64::abs).collect()
    } else if m.anti_hermitian_defect() <= scale {
        let im = m.scale(Complex64::new(0.0, 1.0));
        eigenvalues(&HermitianMatrix::symmetrized(im))?.into_iter().map(f64::abs).collect()
    } else {
        let z = ComplexMatrix::zeros(n);
        let dil = ComplexMatrix::from_blocks(&z, m, &m.adjoint(), &z)?;
        let ev = eigenvalues(&HermitianMatrix::symmetrized(dil))?;
        ev[n..].iter().map(|v| v.max(0.0)).collect()
    };
    SingularValueSeq::new(values)
}

pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) || p.is_nan() {
        return Err(Error::InvalidParameter(format!("Schatten exponent must be >= 1, got {p}")));
    }
    singular_values(m)?.schatten(p)
}

/// `sup_{t>0} t μ(t, M) = max_k (k + 1) μ_k`.
pub fn weak_l1_quasinorm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.weak_l1())
}

/// `(value, weight)` pairs describing a nonincreasing step function
/// `μ(t)`; canonical form has strictly decreasing values and merged weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSingularSeq {
    pairs: Vec<(f64, f64)>,
}

impl WeightedSingularSeq {
    /// Canonicalizes: sort by value descending, merge equal values, drop
    /// zero-weight entries.
    pub fn new(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(v, w) in &pairs {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("value {v} is not finite and nonnegative")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!("weight {w} is not finite and nonnegative")));
            }
        }
        pairs.retain(|&(_, w)| w > 0.0);
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        let total: f64 = merged.iter().map(|p| p.1).sum();
        if !total.is_finite() {
            return Err(Error::NonFinite("total weight".into()));
        }
        Ok(Self { pairs: merged })
    }

    /// Unit weight on every singular value.
    pub fn counting(seq: &SingularValueSeq) -> Self {
        Self::new(seq.values.iter().map(|&v| (v, 1.0)).collect()).expect("validated sequence")
    }

    /// `|values|` with common cell weight, as for a function sampled on a
    /// grid of spacing `h` in dimension `d` (weight `h^d`).
    pub fn from_samples(values: impl IntoIterator<Item = f64>, cell_weight: f64) -> Result<Self> {
        Self::new(values.into_iter().map(|v| (v.abs(), cell_weight)).collect())
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn total_weight(&self) -> f64 {
        self.pairs.iter().map(|p| p.1).sum()
    }

    /// `(v, w) -> (v / c, c w)`.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {c}")));
        }
        Self::new(self.pairs.iter().map(|&(v, w)| (v / c, w * c)).collect())
    }

    /// CSV with header `value,weight`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,weight\n");
        for (v, w) in &self.pairs {
            writeln!(s, "{v},{w}").unwrap();
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "value,weight" => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `value,weight`".into(),
                })
            }
        }
        let mut pairs = Vec::new();
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse {
                line: idx + 1,
                message: format!("bad row `{line}`"),
            };
            let (v, w) = line.split_once(',').ok_or_else(bad)?;
            pairs.push((v.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?));
        }
        Self::new(pairs)
    }
}

/// `sup_{t>0} t μ(t)`, attained at the right end of a constancy interval.
pub fn weak_l1_weighted(s: &WeightedSingularSeq) -> f64 {
    let mut t = 0.0;
    let mut best = 0.0f64;
    for &(v, w) in &s.pairs {
        t += w;
        best = best.max(t * v);
    }
    best
}

/// `n(s)`: total weight of values strictly above `s`.
pub fn distribution_function(seq: &WeightedSingularSeq, s: f64) -> f64 {
    seq.pairs.iter().take_while(|p| p.0 > s).map(|p| p.1).sum()
}

/// `μ(t)`: the value on the constancy interval `(t_{k-1}, t_k]` containing `t`.
pub fn singular_value_function(seq: &WeightedSingularSeq, t: f64) -> f64 {
    let mut acc = 0.0;
    for &(v, w) in &seq.pairs {
        acc += w;
        if t <= acc {
            return v;
        }
    }
    0.0
}

/// Singular values of `M ⊗ g` where `g` is described by `density`.
pub fn tensor_weighted(m: &ComplexMatrix, density: &WeightedSingularSeq) -> Result<WeightedSingularSeq> {
    Ok(tensor_sequence(&singular_values(m)?, density))
}

/// Same as [`tensor_weighted`] with the singular values already at hand.
pub fn tensor_sequence(seq: &SingularValueSeq, density: &WeightedSingularSeq) -> WeightedSingularSeq {
    let mut pairs = Vec::with_capacity(seq.len() * density.pairs.len());
    for &mu in &seq.values {
        for &(v, w) in &density.pairs {
            pairs.push((mu * v, w));
        }
    }
    WeightedSingularSeq::new(pairs).expect("products of valid pairs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    /// One-sided Jacobi SVD, kept independent of the eigensolvers.
    fn svd_oracle(m: &ComplexMatrix) -> Vec<f64> {
        let n = m.dim();
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
        for _ in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                    if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / gamma.norm();
                    let zeta = (beta - alpha) / (2.0 * gamma.norm());
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..n {
                        let a = cols[p][i];
                        let b = cols[q][i] * phase.conj();
                        cols[p][i] = a * c - b * s;
                        cols[q][i] = (a * s + b * c) * phase;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    #[test]
    fn singular_value_examples() {
        let d = ComplexMatrix::diag(&[3.0, -1.0, 2.0]);
        assert_eq!(singular_values(&d).unwrap().values(), &[3.0, 2.0, 1.0]);
        let nil = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let sv = singular_values(&nil).unwrap();
        assert!((sv.get(0) - 2.0).abs() < 1e-15 && sv.get(1).abs() < 1e-15);
    }

    #[test]
    fn singular_values_match_one_sided_jacobi_seed_3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(6, &mut rng);
        let ours = singular_values(&m).unwrap();
        for (a, b) in ours.values().iter().zip(svd_oracle(&m)) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn anti_hermitian_path_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = HermitianMatrix::symmetrized(random_matrix(7, &mut rng));
        let b = HermitianMatrix::symmetrized(random_matrix(7, &mut rng));
        let c = crate::spectral::commutator(a.as_matrix(), b.as_matrix()).unwrap();
        for (x, y) in singular_values(&c).unwrap().values().iter().zip(svd_oracle(&c)) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn schatten_examples() {
        assert_eq!(schatten_norm(&ComplexMatrix::identity(3), 1.0).unwrap(), 3.0);
        let nil = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        assert!((schatten_norm(&nil, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(schatten_norm(&nil, 0.5).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(5, &mut rng);
        let direct = m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((schatten_norm(&m, 2.0).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn weak_examples() {
        let h = ComplexMatrix::diag(&[1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert!((weak_l1_quasinorm(&h).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(weak_l1_quasinorm(&ComplexMatrix::diag(&[3.0, 1.0])).unwrap(), 3.0);
        let r1 = ComplexMatrix::from_fn(3, |i, j| Complex64::new(((i + 1) * (j + 2)) as f64, 0.0));
        let s = schatten_norm(&r1, 2.0).unwrap();
        assert!((weak_l1_quasinorm(&r1).unwrap() - s).abs() < 1e-12 * s);
    }

    #[test]
    fn weighted_examples() {
        let one = WeightedSingularSeq::new(vec![(3.0, 0.25)]).unwrap();
        assert_eq!(weak_l1_weighted(&one), 0.75);
        let two = WeightedSingularSeq::new(vec![(1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(weak_l1_weighted(&two), 2.0);
        assert_eq!(distribution_function(&two, 1.5), 1.0);
        assert_eq!(distribution_function(&two, 2.0), 0.0);
        assert_eq!(distribution_function(&two, 0.0), 2.0);
        assert_eq!(singular_value_function(&two, 0.5), 2.0);
        assert_eq!(singular_value_function(&two, 1.5), 1.0);
        assert_eq!(singular_value_function(&two, 3.0), 0.0);
    }

    #[test]
    fn tensor_examples() {
        let r1 = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let dens = WeightedSingularSeq::new(vec![(0.5, 3.0)]).unwrap();
        let t = tensor_weighted(&r1, &dens).unwrap();
        assert!((t.pairs()[0].0 - 1.0).abs() < 1e-15 && t.pairs()[0].1 == 3.0);
        let t = tensor_weighted(&ComplexMatrix::identity(2), &WeightedSingularSeq::new(vec![(1.0, 0.5)]).unwrap()).unwrap();
        assert_eq!(t.pairs(), &[(1.0, 1.0)]);
    }

    #[test]
    fn canonical_form_merges_and_sorts() {
        let s = WeightedSingularSeq::new(vec![(1.0, 1.0), (3.0, 2.0), (1.0, 0.5), (2.0, 0.0)]).unwrap();
        assert_eq!(s.pairs(), &[(3.0, 2.0), (1.0, 1.5)]);
        assert!(WeightedSingularSeq::new(vec![(-1.0, 1.0)]).is_err());
    }

    #[test]
    fn counting_weights_reproduce_matrix_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let m = random_matrix(6, &mut rng);
            let sv = singular_values(&m).unwrap();
            let w = WeightedSingularSeq::counting(&sv);
            assert!((weak_l1_weighted(&w) - sv.weak_l1()).abs() <= 1e-15 * sv.weak_l1());
        }
    }

    #[test]
    fn csv_roundtrip() {
        let s = WeightedSingularSeq::new(vec![(0.1, 0.5), (2.5e-7, 1.0 / 3.0)]).unwrap();
        assert_eq!(WeightedSingularSeq::from_csv(&s.to_csv()).unwrap(), s);
        assert!(WeightedSingularSeq::from_csv("v,w\n").is_err());
    }
}
