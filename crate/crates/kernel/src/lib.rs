//! Fixed-size dense linear algebra used across the workspace.
//!
//! Everything here is deterministic: closed forms for 2×2 spectral and
//! singular value problems, an unpivoted Cholesky with an explicit SPD
//! threshold, an SVD-backed null space, a Padé matrix exponential and a
//! Levenberg–Marquardt solver with finite-difference Jacobians.

mod chol;
mod expm;
mod lsq;
mod null;
mod two;

pub use chol::{cholesky_lower, is_spd, reverse_cholesky};
pub use expm::expm;
pub use lsq::{least_squares_solve, LsqOptions, LsqOutcome};
pub use null::{null_space, NullSpace};
pub use two::{rotation, svd2, sym_eig2, Eig2, Svd2};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotSpd { index: usize, pivot: f64 },
    #[error("least-squares residual became non-finite")]
    Diverged,
}

/// Largest absolute entry.
pub fn max_abs<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
