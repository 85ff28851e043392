//! Structure constants and brackets for six-dimensional nilpotent Lie
//! algebras.
//!
//! The sign convention is fixed throughout: `de^k = Σ_{i<j} c^k_{ij} e^{ij}`,
//! equivalently `e^k([e_i, e_j]) = −c^k_{ij}`, so that
//! `dθ(X, Y) = −θ([X, Y])`.

mod algebra;
mod complex;
mod salamon;

pub use algebra::{hat_permutation, Builtin, LieAlgebra, TwoForm, DIM};
pub use complex::{is_abelian_structure, nijenhuis, nijenhuis_residual, AlmostComplexStructure, INVOLUTION_TOL};
pub use salamon::{parse_salamon, ParseError, ParseErrorKind};

use thiserror::Error;

pub type Vector = nalgebra::Vector6<f64>;
pub type Mat6 = nalgebra::Matrix6<f64>;

/// Default tolerance for boolean predicates.
pub const PREDICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("change of basis matrix is singular")]
    SingularMatrix,
    #[error("lower central series stabilizes at dimension {0}")]
    NotNilpotent(usize),
    #[error("J² + I has max entry {0:e}")]
    NotInvolutive(f64),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
}
