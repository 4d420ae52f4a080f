//! Gaussian densities, plane waves, convolution and Fourier multipliers on
//! periodic grids.
//!
//! Frequencies are angular: the DFT bin with signed index `s` on a grid of
//! half-width `L` carries `ξ = π s / L`, so `m(∇) e_k = m(k) e_k` for every
//! lattice frequency `k`.

mod fft;
mod grid;
mod smoothing;
mod transference;

pub use fft::{convolve, multiplier_apply, multiplier_apply_in_place, Dft, FrequencySymbol};
pub use grid::{
    delta, gaussian, gaussian_density, indicator, next_fast_len, plane_wave, GridField, GridSpec, GAUSSIAN_REACH,
    H_MAX,
};
pub use smoothing::{
    block_difference, gaussian_profile, gaussian_weak_exact, intertwining_error, mean_zero_step, sandwich_lower,
    smoothed_l1, smoothing_grid, smoothing_sweep, tensor_gaussian_weak, IntertwiningResult, DYADIC_LS,
    TENSOR_SAMPLES_1D, TENSOR_SAMPLES_2D,
};
pub use transference::{transference_check, TransferenceReport, INTEGER_TOL, SLOPE_TOL};
