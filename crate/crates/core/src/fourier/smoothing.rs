//! Gaussian smoothing, multiplier intertwining and the Gaussian tensor
//! sandwich, realized on periodic grids.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::{convolve, multiplier_apply_in_place};
use super::grid::{gaussian_density, indicator, plane_wave, GridField, GridSpec, GAUSSIAN_REACH, H_MAX};
use crate::error::{Error, Result};
use crate::norms::{tensor_sequence, weak_l1_weighted, SingularValueSeq, WeightedSingularSeq};

/// Dyadic smoothing scales `1, 2, ..., 32`.
pub const DYADIC_LS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// Grid with spacing [`H_MAX`] wide enough for `G_l` around a support of
/// radius `reach`.
pub fn smoothing_grid(l: f64, dim: usize, reach: f64) -> Result<GridSpec> {
    GridSpec::with_spacing(dim, GAUSSIAN_REACH * l + reach, H_MAX)
}

/// `χ_[0,1) - χ_[1,2)` on a 1D grid.
pub fn mean_zero_step(grid: &GridSpec) -> Result<GridField> {
    if grid.dim() != 1 {
        return Err(Error::InvalidParameter("step input is one-dimensional".into()));
    }
    indicator(grid, 0.0, 1.0).sub(&indicator(grid, 1.0, 2.0))
}

/// `(χ_[0,1) - χ_[1,2)) ⊗ χ_[0,1)` on a 2D grid.
pub fn block_difference(grid: &GridSpec) -> Result<GridField> {
    if grid.dim() != 2 {
        return Err(Error::InvalidParameter("block input is two-dimensional".into()));
    }
    let axis = GridSpec::new(1, grid.half_width(), grid.n())?;
    GridField::tensor(&mean_zero_step(&axis)?, &indicator(&axis, 0.0, 1.0))
}

/// `||f * G_l^{⊗d}||_1` on the grid of `f`.
pub fn smoothed_l1(f: &GridField, l: f64) -> Result<f64> {
    let g = gaussian_density(l, f.spec())?;
    Ok(convolve(f, &g)?.l1_norm())
}

/// `(l, ||f_l * G_l||_1)` along `ls`, with a fresh grid per `l` and `f_l`
/// built by `input` on that grid.
pub fn smoothing_sweep(
    ls: &[f64],
    dim: usize,
    reach: f64,
    input: impl Fn(&GridSpec) -> Result<GridField>,
) -> Result<Vec<(f64, f64)>> {
    ls.iter()
        .map(|&l| {
            let grid = smoothing_grid(l, dim, reach)?;
            Ok((l, smoothed_l1(&input(&grid)?, l)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwiningResult {
    /// `||(m(∇))(G_l e_k) - m(k) G_l e_k||_1`.
    pub error: f64,
    /// Distance from the requested `k` to the lattice frequency used.
    pub snap_distance: f64,
    pub k: Vec<f64>,
}

/// Intertwining defect of the multiplier `m` on the Gaussian wave packet
/// `G_l^{⊗d} e_k`. `k` is snapped to the grid's frequency lattice.
pub fn intertwining_error(
    m: impl Fn([f64; 2]) -> Complex64,
    k: &[f64],
    l: f64,
    grid: &GridSpec,
) -> Result<IntertwiningResult> {
    let (k, snap_distance) = grid.snap_to_lattice(k);
    let mut field = gaussian_density(l, grid)?.mul(&plane_wave(&k, grid)?)?;
    let kk = [k[0], if k.len() > 1 { k[1] } else { 0.0 }];
    let at_k = m(kk);
    multiplier_apply_in_place(&mut field, |xi| m(xi) - at_k)?;
    Ok(IntertwiningResult {
        error: field.l1_norm(),
        snap_distance,
        k,
    })
}

/// Samples per axis used for the Gaussian tensor experiments.
pub const TENSOR_SAMPLES_1D: usize = 8192;
pub const TENSOR_SAMPLES_2D: usize = 1024;

/// `μ(G_l^{⊗d})` as a weighted sequence, sampled on `[-8l, 8l)^d` with `n`
/// points per axis. With `n` fixed the samples for different `l` are exact
/// dilations of one another.
pub fn gaussian_profile(l: f64, dim: usize, n: usize) -> Result<WeightedSingularSeq> {
    let grid = GridSpec::new(dim, GAUSSIAN_REACH * l, n)?;
    let g = gaussian_density(l, &grid)?;
    WeightedSingularSeq::from_samples(g.values().iter().map(|z| z.re), grid.cell())
}

/// `||X ⊗ G_l^{⊗d}||_{1,∞}` from the singular values of `X`.
pub fn tensor_gaussian_weak(sv: &SingularValueSeq, l: f64, dim: usize, n: usize) -> Result<f64> {
    let profile = gaussian_profile(l, dim, n)?;
    Ok(weak_l1_weighted(&tensor_sequence(sv, &profile)))
}

/// `sup_t t μ(t, G_1^{⊗d})` in closed form. In 1D `μ(t, G_1) = G_1(t/2)`,
/// in 2D `μ(t, G_1^{⊗2}) = e^{-t/π} / π`.
pub fn gaussian_weak_exact(dim: usize) -> f64 {
    match dim {
        1 => 2f64.sqrt() * (-0.5f64).exp() / PI.sqrt(),
        2 => (-1.0f64).exp(),
        _ => f64::NAN,
    }
}

/// The lower constant `e^{-d} π^{-d/2}`.
pub fn sandwich_lower(dim: usize) -> f64 {
    (-(dim as f64)).exp() * PI.powf(-(dim as f64) / 2.0)
}
