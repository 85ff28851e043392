//! Hermitian structures on the built-in nilpotent groups.
//!
//! A pair `(g, J)` is Hermitian when `J² = −I`, `Jᵀ g J = g` and the
//! Nijenhuis tensor of `J` vanishes. For `h5`, `h4` and `h6` the structures
//! compatible with a canonical metric are given in closed form; for `h2` a
//! finite candidate list is produced and checked; for `h9` the special
//! families around the abelian structure `J0` are constructed. A numeric
//! search covers everything else.

mod general;
mod h2;
mod h6;
mod h9;
mod search;
mod tables;

pub use general::{hermitian_structures, transport, MetricStructures};
pub use h2::{h2_hermitian_candidates, h2_j, H2Candidate, H2Candidates, H2Params};
pub use h6::h6_hermitian_solutions;
pub use h9::{h9_gprime_metric, h9_j0, h9_sigma_family, GPrime, Sigma, SigmaMember};
pub use search::{hermitian_search, SearchOutcome, SEARCH_MAX_ITER, SEARCH_THRESHOLD};
pub use tables::{h4_hermitian_solutions, h4_j, h5_hermitian_solutions, h5_j, HermitianParams, TableSolutions};

use nilmoduli_algebra::{nijenhuis_residual, AlgebraError, AlmostComplexStructure, Builtin, LieAlgebra, Mat6, DIM};
use nilmoduli_moduli::ModuliError;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Bound on `|a² + b² + c² − 1|`.
pub const SPHERE_TOL: f64 = 1e-12;

/// Nijenhuis bound for emitted closed-form solutions.
pub const INTEGRABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermitianError {
    #[error("triple is off the unit sphere (|a² + b² + c² − 1| = {0:e})")]
    InvalidTriple(f64),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which displayed family a structure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    J1,
    J2,
    #[serde(rename = "J1+")]
    J1Plus,
    #[serde(rename = "J1-")]
    J1Minus,
    #[serde(rename = "J2+")]
    J2Plus,
    #[serde(rename = "J2-")]
    J2Minus,
}

/// A point `(a, b, c)` of the unit sphere parameterizing a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub branch: Branch,
}

impl SolutionTriple {
    pub fn new(a: f64, b: f64, c: f64, branch: Branch) -> Result<Self, HermitianError> {
        let t = Self { a, b, c, branch };
        let off = t.sphere_defect();
        if !(off <= SPHERE_TOL) {
            return Err(HermitianError::InvalidTriple(off));
        }
        Ok(t)
    }

    pub fn sphere_defect(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c - 1.0).abs()
    }
}

/// Residuals of a candidate `(g, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// Max over basis pairs of `‖N_J(e_i, e_j)‖`.
    pub nijenhuis: f64,
    /// `‖Jᵀ g J − g‖_max`.
    pub compatibility: f64,
    /// `‖J² + I‖_max`.
    pub involution: f64,
}

impl Residuals {
    pub fn of(alg: &LieAlgebra, g: &Mat6, j: &Mat6) -> Self {
        Self {
            nijenhuis: nijenhuis_residual(alg, j),
            compatibility: (j.transpose() * g * j - g).amax(),
            involution: (j * j + Mat6::identity()).amax(),
        }
    }

    pub fn max(&self) -> f64 {
        self.nijenhuis.max(self.compatibility).max(self.involution)
    }
}

/// A structure emitted by one of the closed forms, with its checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub triple: SolutionTriple,
    pub j: AlmostComplexStructure,
    pub residuals: Residuals,
    /// Whether `−J` passes the same checks.
    pub negation_ok: bool,
}

impl Solution {
    pub(crate) fn checked(alg: Builtin, g: &Mat6, triple: SolutionTriple, j: AlmostComplexStructure) -> Self {
        let lie = LieAlgebra::builtin(alg);
        let residuals = Residuals::of(&lie, g, j.matrix());
        let neg = Residuals::of(&lie, g, j.negate().matrix());
        let negation_ok = neg.nijenhuis <= INTEGRABILITY_TOL && neg.compatibility <= 1e-11;
        Self {
            triple,
            j,
            residuals,
            negation_ok,
        }
    }
}

fn row_major(m: &Mat6) -> Vec<f64> {
    (0..DIM).flat_map(|i| (0..DIM).map(move |k| m[(i, k)])).collect()
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Solution", 7)?;
        st.serialize_field("J", &row_major(self.j.matrix()))?;
        st.serialize_field("a", &self.triple.a)?;
        st.serialize_field("b", &self.triple.b)?;
        st.serialize_field("branch", &self.triple.branch)?;
        st.serialize_field("c", &self.triple.c)?;
        st.serialize_field("negation_ok", &self.negation_ok)?;
        st.serialize_field("residuals", &self.residuals)?;
        st.end()
    }
}

/// Solutions of one family: finitely many, or the whole sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "solutions", rename_all = "lowercase")]
pub enum SolutionSet {
    Finite(Vec<Solution>),
    /// Every `(a, b, c)` on the sphere gives a complex structure.
    Sphere(Branch),
}

impl SolutionSet {
    pub fn finite(&self) -> &[Solution] {
        match self {
            SolutionSet::Finite(v) => v,
            SolutionSet::Sphere(_) => &[],
        }
    }
}
