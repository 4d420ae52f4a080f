//! Smooth bump `ψ` and the annular cutoffs `φ_m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FrequencySymbol, GridSpec};

/// `C^∞` step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, `E(x) / (E(x) + E(1 - x))`
/// with `E(x) = e^{-1/x}` in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Even bump equal to 1 on `[-1, 1]` and supported in `(-2, 2)`.
pub fn psi(s: f64) -> f64 {
    smooth_step(2.0 - s.abs())
}

/// `Ψ = ψ ⊗ ψ`.
pub fn psi2(xi: [f64; 2]) -> f64 {
    psi(xi[0]) * psi(xi[1])
}

/// `φ_m(ξ) = Ψ(ξ / 3m) - Ψ(3m ξ)`. Equal to 1 on `2/(3m) ≤ |ξ|_∞ ≤ 3m`,
/// zero near the origin and for `|ξ|_∞ ≥ 6m`.
pub fn cutoff(m: u32, xi: [f64; 2]) -> f64 {
    let c = 3.0 * m as f64;
    psi2([xi[0] / c, xi[1] / c]) - psi2([xi[0] * c, xi[1] * c])
}

/// `φ_m` sampled on the frequency lattice of `grid`.
pub fn cutoff_symbol(m: u32, grid: &GridSpec) -> Result<FrequencySymbol> {
    if m == 0 {
        return Err(Error::InvalidParameter("cutoff index must be positive".into()));
    }
    FrequencySymbol::from_fn(*grid, |xi| Complex64::new(cutoff(m, xi), 0.0))
}

const PSI_HAT_NODES: usize = 2000;

/// `ψ̂(x) = ∫ ψ(t) e^{-ixt} dt = 2 ∫_0^2 ψ(t) cos(xt) dt` by the
/// trapezoid rule, spectrally accurate for the compactly supported `ψ`.
pub fn psi_hat(x: f64) -> f64 {
    let h = 2.0 / PSI_HAT_NODES as f64;
    let mut s = 0.5 * psi(0.0);
    for j in 1..PSI_HAT_NODES {
        let t = j as f64 * h;
        s += psi(t) * (x * t).cos();
    }
    2.0 * s * h
}

/// `ψ̂` is below `1e-8` beyond this point.
pub const PSI_HAT_REACH: f64 = 100.0;
const MASS_STEP: f64 = 0.02;

/// `||F^{-1} φ_m||_1` with `F^{-1} φ(x) = (2π)^{-2} ∫ φ(ξ) e^{i⟨x,ξ⟩} dξ`,
/// the kernel mass of the multiplier `φ_m(∇)`.
///
/// After the substitution `y = 3m x` this is
/// `(2π)^{-2} ∫ |Ψ̂(y) - q² Ψ̂(q y)| dy` with `q = 1/(9m²)`. Both terms are
/// separable, so the integral runs on a tensor grid with step `0.02` on
/// `[0, R]` and `0.02/q` on `[R, R/q]`.
pub fn fourier_mass(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("cutoff index must be positive".into()));
    }
    let q = 1.0 / (9.0 * (m as f64).powi(2));
    Ok(dilation_gap_mass(q))
}

/// `(2π)^{-2} ∫ |Ψ̂(y) - q² Ψ̂(q y)| dy` for `0 < q ≤ 1`.
pub(crate) fn dilation_gap_mass(q: f64) -> f64 {
    let fine = (PSI_HAT_REACH / MASS_STEP).round() as usize;
    let coarse_step = MASS_STEP / q;
    let coarse = ((PSI_HAT_REACH / q - PSI_HAT_REACH) / coarse_step).ceil() as usize;
    let mut nodes = Vec::with_capacity(fine + coarse);
    for j in 0..fine {
        nodes.push(((j as f64 + 0.5) * MASS_STEP, MASS_STEP));
    }
    for j in 0..coarse {
        nodes.push((PSI_HAT_REACH + (j as f64 + 0.5) * coarse_step, coarse_step));
    }
    let u: Vec<f64> = nodes.iter().map(|&(y, _)| if y < PSI_HAT_REACH { psi_hat(y) } else { 0.0 }).collect();
    let v: Vec<f64> = nodes.iter().map(|&(y, _)| q * psi_hat(q * y)).collect();
    let mut total = 0.0;
    for i in 0..nodes.len() {
        let (ui, vi, wi) = (u[i], v[i], nodes[i].1);
        let mut row = 0.0;
        for j in 0..nodes.len() {
            row += (ui * u[j] - vi * v[j]).abs() * nodes[j].1;
        }
        total += row * wi;
    }
    // four quadrants
    4.0 * total / (4.0 * PI * PI)
}
