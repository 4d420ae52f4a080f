use num_complex::Complex64;

use super::symbol::CircleSymbol;
use crate::error::{Error, Result};
use crate::fourier::{GridField, GridSpec};

/// Finest spacing ratio `h / r_min` accepted by [`cz_condition_check`].
pub const CZ_SPACING_RATIO: f64 = 1.0 / 16.0;

/// A kernel sampled on the part of a 2D grid inside `r_min ≤ |z| ≤ r_max`,
/// zero elsewhere.
#[derive(Clone, Debug)]
pub struct KernelField {
    pub field: GridField,
    pub r_min: f64,
    pub r_max: f64,
    /// Certified bound on the truncation error of the kernel profile.
    pub tail_bound: f64,
}

impl KernelField {
    pub fn in_annulus(&self, z: [f64; 2]) -> bool {
        let r = z[0].hypot(z[1]);
        r >= self.r_min && r <= self.r_max
    }
}

/// `K(z) = h(z/|z|) / |z|²` for the truncated series of `g`; the `α_0`
/// delta is dropped.
pub fn kernel_at(coefficients: &[(i64, Complex64)], z: [f64; 2]) -> Complex64 {
    let r2 = z[0] * z[0] + z[1] * z[1];
    let r = r2.sqrt();
    let e = Complex64::new(z[0] / r, z[1] / r);
    let k_top = coefficients.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0) as usize;
    let mut pos = vec![Complex64::new(1.0, 0.0); k_top + 1];
    for k in 1..=k_top {
        pos[k] = pos[k - 1] * e;
    }
    let mut s = Complex64::new(0.0, 0.0);
    for &(k, c) in coefficients {
        let p = pos[k.unsigned_abs() as usize];
        s += c * if k > 0 { p } else { p.conj() };
    }
    s / r2
}

/// Samples the kernel of `g` on the annulus `r_min ≤ |z| ≤ r_max` of a 2D
/// grid. Fails when the quartic decay certificate cannot guarantee the
/// profile to within `accuracy`.
pub fn kernel_from_symbol(
    g: &CircleSymbol,
    grid: &GridSpec,
    r_min: f64,
    r_max: f64,
    accuracy: f64,
) -> Result<KernelField> {
    if grid.dim() != 2 {
        return Err(Error::InvalidParameter("kernels live on a 2D grid".into()));
    }
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::InvalidParameter(format!(
            "annulus needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    if r_max > grid.half_width() {
        return Err(Error::GridTooSmall(format!(
            "annulus radius {r_max} exceeds grid half-width {}",
            grid.half_width()
        )));
    }
    let tail = g.kernel_tail_bound();
    if tail > accuracy {
        return Err(Error::DecayCertificate { tail, accuracy });
    }
    let coefficients = g.kernel_coefficients();
    let field = GridField::from_fn(*grid, |z| {
        let r = z[0].hypot(z[1]);
        if r < r_min || r > r_max {
            Complex64::new(0.0, 0.0)
        } else {
            kernel_at(&coefficients, z)
        }
    });
    Ok(KernelField {
        field,
        r_min,
        r_max,
        tail_bound: tail,
    })
}

/// `(C0, C1)`: the largest `|t|² |K(t)|` over the annulus and the largest
/// `|t|³ |∇K(t)|` over points whose four neighbours are also in it, with
/// `∇` by centered differences.
pub fn cz_condition_check(k: &KernelField) -> Result<(f64, f64)> {
    let grid = k.field.spec();
    let h = grid.spacing();
    if h > CZ_SPACING_RATIO * k.r_min {
        return Err(Error::GridTooSmall(format!(
            "spacing {h} is coarser than r_min / 16 = {}",
            CZ_SPACING_RATIO * k.r_min
        )));
    }
    let n = grid.n();
    let v = k.field.values();
    let (mut c0, mut c1): (f64, f64) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let z = grid.point(i * n + j);
            if !k.in_annulus(z) {
                continue;
            }
            let r2 = z[0] * z[0] + z[1] * z[1];
            let r = r2.sqrt();
            c0 = c0.max(r2 * v[i * n + j].norm());
            if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                continue;
            }
            let neighbours = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)];
            if !neighbours.iter().all(|&(a, b)| k.in_annulus(grid.point(a * n + b))) {
                continue;
            }
            // row index i runs along the first coordinate
            let dx = (v[(i + 1) * n + j] - v[(i - 1) * n + j]) / (2.0 * h);
            let dy = (v[i * n + j + 1] - v[i * n + j - 1]) / (2.0 * h);
            let grad = (dx.norm_sqr() + dy.norm_sqr()).sqrt();
            c1 = c1.max(r2 * r * grad);
        }
    }
    if !(c0.is_finite() && c1.is_finite()) {
        return Err(Error::NonFinite("kernel constants".into()));
    }
    Ok((c0, c1))
}
