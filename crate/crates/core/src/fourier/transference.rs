//! Transference of a double operator integral with integer spectrum to a
//! Fourier multiplier on `R²`.
//!
//! With `u = Σ_j p_j ⊗ e_{(j, f(j))}` the block `(a, b)` of `u (V ⊗ G_l) u*`
//! is `p_a V p_b ⊗ G_l e_{k_ab}` with `k_ab = (s_a - s_b, f(s_a) - f(s_b))`.
//! Applying the multiplier `m` entrywise and subtracting
//! `u (T_{f^{[1]}}(V) ⊗ G_l) u*` leaves the blocks
//! `p_a V p_b ⊗ (m(∇)(G_l e_{k_ab}) - f^{[1]}(s_a, s_b) G_l e_{k_ab})`.

use num_complex::Complex64;

use super::fft::multiplier_apply_in_place;
use super::grid::{gaussian_density, plane_wave, GridField, GridSpec};
use crate::doi::{clusters, default_cluster_tol, divided_difference};
use crate::error::{Error, Result};
use crate::funclib::LipschitzFn;
use crate::norms::singular_values;
use crate::spectral::{hermitian_eig, ComplexMatrix, HermitianMatrix, EIG_TOL};

/// Slack on `||f'||_∞ ≤ 1`.
pub const SLOPE_TOL: f64 = 1e-12;
/// Eigenvalue clusters must sit this close to an integer.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TransferenceReport {
    /// `Σ_x ||D(x)||_1 h²`.
    pub error: f64,
    /// Largest distance from a block frequency to the lattice.
    pub max_snap_distance: f64,
    /// Block frequencies `k_ab` actually used, one per nonzero block.
    pub frequencies: Vec<[f64; 2]>,
}

/// `m(∇)(G_l e_k) - c G_l e_k` on a 2D grid.
fn block_field(
    m: &impl Fn([f64; 2]) -> Complex64,
    k: [f64; 2],
    c: f64,
    gaussian: &GridField,
    grid: &GridSpec,
) -> Result<GridField> {
    let packet = gaussian.mul(&plane_wave(&k, grid)?)?;
    let mut field = packet.clone();
    multiplier_apply_in_place(&mut field, m)?;
    field.sub(&packet.scale(Complex64::new(c, 0.0)))
}

/// Trace-norm defect of the transference formula for `A`, `V`, `f` and the
/// multiplier `m`, summed over a 2D grid.
pub fn transference_check(
    a: &HermitianMatrix,
    v: &ComplexMatrix,
    f: &LipschitzFn,
    m: impl Fn([f64; 2]) -> Complex64,
    l: f64,
    grid: &GridSpec,
) -> Result<TransferenceReport> {
    v.check_dim(a.as_matrix())?;
    if grid.dim() != 2 {
        return Err(Error::InvalidParameter("transference runs on a 2D grid".into()));
    }
    if f.lipschitz_constant() > 1.0 + SLOPE_TOL {
        return Err(Error::InvalidParameter(format!(
            "`{}` has Lipschitz constant {} > 1; rescale first",
            f.name(),
            f.lipschitz_constant()
        )));
    }
    let d = hermitian_eig(a, EIG_TOL)?;
    let (ids, means) = clusters(d.eigenvalues(), default_cluster_tol(&d));
    let mut spectrum = Vec::with_capacity(means.len());
    for &s in &means {
        let r = s.round();
        if (s - r).abs() > INTEGER_TOL * (1.0 + s.abs()) {
            return Err(Error::NonIntegerSpectrum(s));
        }
        spectrum.push(r);
    }
    let vp = d.to_eigenbasis(v);
    let n = vp.dim();
    let c = spectrum.len();

    // which cluster blocks carry any mass
    let mut active = vec![false; c * c];
    for p in 0..n {
        for q in 0..n {
            if vp.get(p, q) != Complex64::new(0.0, 0.0) {
                active[ids[p] * c + ids[q]] = true;
            }
        }
    }

    let gaussian = gaussian_density(l, grid)?;
    let mut fields: Vec<Option<GridField>> = vec![None; c * c];
    let mut frequencies = Vec::new();
    let mut max_snap: f64 = 0.0;
    for ia in 0..c {
        for ib in 0..c {
            if !active[ia * c + ib] {
                continue;
            }
            let (sa, sb) = (spectrum[ia], spectrum[ib]);
            let raw = [sa - sb, f.eval(sa) - f.eval(sb)];
            let (k, dist) = grid.snap_to_lattice(&raw);
            max_snap = max_snap.max(dist);
            let k = [k[0], k[1]];
            frequencies.push(k);
            let xi = divided_difference(f, sa, sb);
            fields[ia * c + ib] = Some(block_field(&m, k, xi, &gaussian, grid)?);
        }
    }

    let diagonal = (0..n).all(|p| (0..n).all(|q| p == q || vp.get(p, q) == Complex64::new(0.0, 0.0)));
    let mut total = 0.0;
    let mut block = ComplexMatrix::zeros(n);
    for idx in 0..grid.len() {
        if diagonal {
            total += (0..n)
                .filter_map(|p| fields[ids[p] * c + ids[p]].as_ref().map(|fld| (vp.get(p, p) * fld.values()[idx]).norm()))
                .sum::<f64>();
            continue;
        }
        for p in 0..n {
            for q in 0..n {
                let w = vp.get(p, q);
                let z = match &fields[ids[p] * c + ids[q]] {
                    Some(fld) if w != Complex64::new(0.0, 0.0) => w * fld.values()[idx],
                    _ => Complex64::new(0.0, 0.0),
                };
                block.set(p, q, z);
            }
        }
        total += singular_values(&block)?.values().iter().sum::<f64>();
    }
    Ok(TransferenceReport {
        error: total * grid.cell(),
        max_snap_distance: max_snap,
        frequencies,
    })
}
