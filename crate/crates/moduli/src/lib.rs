//! Moduli of left-invariant metrics on the built-in nilpotent groups.
//!
//! A metric is an SPD matrix in the basis of its algebra, and automorphisms
//! act on the right by `g · φ = φᵀ g φ`. [`canonicalize`] returns the unique
//! representative of the orbit together with a witness `φ` satisfying
//! `φᵀ · realize(form) · φ = g`.

mod canon;
mod form;
mod isometry;
mod sample;

pub use canon::canonicalize;
pub use form::{realize, CanonicalForm};
pub use isometry::{isometry_group, verify_isometry_group, GroupDescriptor, IsometryReport};
pub use sample::random_form;

use nilmoduli_algebra::{Builtin, Mat6, DIM};
use nilmoduli_automorphisms::Automorphism;
use nilmoduli_kernel::is_spd;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Witness residual bound, relative to `max(1, ‖g‖_max)`.
pub const WITNESS_TOL: f64 = 1e-8;

/// Relative tolerance for equality tests between form parameters.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("metric is not symmetric positive definite")]
    NotSpd,
    #[error("invalid canonical form: {0}")]
    InvalidForm(String),
    #[error("expected input for {expected}, got {found}")]
    Mismatch { expected: Builtin, found: &'static str },
    #[error("canonicalization failed (witness residual {residual:e})")]
    CanonicalizationFailed { residual: f64 },
}

/// An inner product on a built-in algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    algebra: Builtin,
    matrix: Mat6,
}

impl Metric {
    /// Symmetrizes nothing: the input must be exactly symmetric.
    pub fn new(algebra: Builtin, matrix: Mat6) -> Result<Self, ModuliError> {
        if matrix != matrix.transpose() || !is_spd(&matrix) {
            return Err(ModuliError::NotSpd);
        }
        Ok(Self { algebra, matrix })
    }

    /// Replaces `m` by `(m + mᵀ)/2` before checking positivity.
    pub fn symmetrized(algebra: Builtin, m: &Mat6) -> Result<Self, ModuliError> {
        Self::new(algebra, (m + m.transpose()) * 0.5)
    }

    pub fn identity(algebra: Builtin) -> Self {
        Self {
            algebra,
            matrix: Mat6::identity(),
        }
    }

    pub fn algebra(&self) -> Builtin {
        self.algebra
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.matrix
    }
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    algebra: Builtin,
    matrix: Vec<Vec<f64>>,
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let matrix = (0..DIM)
            .map(|i| (0..DIM).map(|j| self.matrix[(i, j)]).collect())
            .collect();
        MetricRepr {
            algebra: self.algebra,
            matrix,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MetricRepr::deserialize(d)?;
        if repr.matrix.len() != DIM || repr.matrix.iter().any(|r| r.len() != DIM) {
            return Err(D::Error::custom("metric matrix must be 6×6"));
        }
        let m = Mat6::from_fn(|i, j| repr.matrix[i][j]);
        Metric::new(repr.algebra, m).map_err(D::Error::custom)
    }
}

/// Automorphism carrying the canonical metric to the input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub automorphism: Automorphism,
    /// `‖φᵀ · realize(form) · φ − g‖_max`.
    pub residual: f64,
}

/// `φᵀ g φ`.
pub fn pullback_metric(g: &Metric, phi: &Automorphism) -> Result<Metric, ModuliError> {
    if phi.algebra != g.algebra {
        return Err(ModuliError::Mismatch {
            expected: g.algebra,
            found: phi.algebra.name(),
        });
    }
    let m = phi.matrix.transpose() * g.matrix * phi.matrix;
    Metric::symmetrized(g.algebra, &m)
}

/// `|x − y| ≤ EQUALITY_TOL · max(1, |x|, |y|)`.
pub fn approx_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= EQUALITY_TOL * x.abs().max(y.abs()).max(1.0)
}

#[cfg(test)]
mod tests;
