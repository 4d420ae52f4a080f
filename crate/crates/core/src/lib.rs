//! Finite-dimensional laboratory for weak-(1,1) operator Lipschitz estimates.
//!
//! The crate realizes, on dense Hermitian matrices and uniform periodic grids,
//! the objects that appear in weak-type Lipschitz bounds for functions of
//! self-adjoint operators:
//!
//! * [`spectral`]: complex matrices, a cyclic Jacobi eigensolver and the
//!   functional calculus `f(A)`.
//! * [`norms`]: singular value sequences, Schatten norms and the weak
//!   `L_{1,∞}` quasi-norm over counting and weighted traces.
//! * [`funclib`]: Lipschitz functions with exact constants.
//! * [`doi`]: divided differences and double operator integrals realized as
//!   eigenbasis Schur multipliers.
//! * [`fourier`]: Gaussian smoothing, plane waves and Fourier multipliers on
//!   periodic grids, plus the transference construction.
//! * [`czkernel`]: homogeneous circle symbols, their kernels and the
//!   Calderón–Zygmund size/smoothness checks.
//! * [`harness`]: seeded ensembles, ratio experiments, reports and the CLI.

pub mod czkernel;
pub mod doi;
pub mod error;
pub mod fourier;
pub mod funclib;
pub mod harness;
pub mod norms;
pub mod spectral;

pub use error::{Error, Result};
