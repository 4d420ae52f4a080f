//! Homogeneous circle symbols, their singular integral kernels and the
//! smooth cutoffs used to localize multipliers.

mod cutoff;
mod kernel;
mod symbol;

pub use cutoff::{cutoff, cutoff_symbol, fourier_mass, psi, psi2, psi_hat, smooth_step, PSI_HAT_REACH};
pub use kernel::{cz_condition_check, kernel_at, kernel_from_symbol, KernelField, CZ_SPACING_RATIO};
pub use symbol::{
    symbol_divided_difference_identity, symbol_from_samples, tan_profile, tan_symbol, tan_symbol_with, CircleSymbol,
    ALIAS_FACTOR, REALITY_TOL, TAN_DELTA, TAN_K_MAX, TAN_SAMPLES,
};
