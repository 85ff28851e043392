//! Automorphisms of the built-in algebras.
//!
//! Every automorphism group here is described by an explicit matrix shape.
//! The shapes are checked against bracket preservation rather than trusted.

mod forms;
mod sample;

pub use forms::{
    complex_block, component_count, h4_pairing, psi, sigma, Block24, H2Params, H4Params, H5Params, H6Params, H9Params,
    StructuredParams,
};
pub use sample::random_automorphism;

use nalgebra::DMatrix;
use nilmoduli_algebra::{Builtin, LieAlgebra, Mat6, Vector, DIM};
use nilmoduli_kernel::null_space;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutError {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(&'static str),
    #[error("parameters do not belong to {0}")]
    Mismatch(Builtin),
    #[error("{0} is only available for built-in algebras")]
    Unsupported(&'static str),
    #[error("matrix is not an automorphism (bracket defect {0:e})")]
    NotAutomorphism(f64),
}

/// Singular-value cutoff for derivation ranks.
pub const DERIVATION_TOL: f64 = 1e-10;

/// An automorphism with its algebra tag and component label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Automorphism {
    pub matrix: Mat6,
    pub algebra: Builtin,
    pub component: Option<usize>,
}

impl Automorphism {
    /// Checks bracket preservation at `tol` and tags the component.
    pub fn new(algebra: Builtin, matrix: Mat6, tol: f64) -> Result<Self, AutError> {
        let alg = LieAlgebra::builtin(algebra);
        if !is_automorphism(&alg, &matrix, tol) {
            return Err(AutError::NotAutomorphism(bracket_defect(&alg, &matrix)));
        }
        let component = component_of(algebra, &matrix);
        Ok(Self {
            matrix,
            algebra,
            component,
        })
    }

    pub fn identity(algebra: Builtin) -> Self {
        Self {
            matrix: Mat6::identity(),
            algebra,
            component: Some(0),
        }
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let matrix = self.matrix * other.matrix;
        Automorphism {
            matrix,
            algebra: self.algebra,
            component: component_of(self.algebra, &matrix),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let matrix = self.matrix.try_inverse().expect("automorphisms are invertible");
        Automorphism {
            matrix,
            algebra: self.algebra,
            component: component_of(self.algebra, &matrix),
        }
    }

    /// Row-major entries.
    pub fn row_major(&self) -> [f64; 36] {
        let mut out = [0.0; 36];
        for i in 0..DIM {
            for j in 0..DIM {
                out[DIM * i + j] = self.matrix[(i, j)];
            }
        }
        out
    }
}

impl Serialize for Automorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Automorphism", 3)?;
        st.serialize_field("algebra", &self.algebra)?;
        st.serialize_field("component", &self.component)?;
        st.serialize_field("matrix", &self.row_major()[..])?;
        st.end()
    }
}

/// Max over basis pairs of `‖M[e_i, e_j] − [Me_i, Me_j]‖`.
pub fn bracket_defect(alg: &LieAlgebra, m: &Mat6) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let lhs = m * alg.bracket_basis(i, j);
            let rhs = alg.bracket(&m.column(i).into(), &m.column(j).into());
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Invertible and bracket-preserving, with the defect measured against
/// `tol · max(1, ‖M‖²_max)`.
pub fn is_automorphism(alg: &LieAlgebra, m: &Mat6, tol: f64) -> bool {
    let scale = m.amax().powi(2).max(1.0);
    let sv = m.singular_values();
    let invertible = sv.min() > 1e-12 * sv.max() && sv.max().is_finite();
    invertible && bracket_defect(alg, m) <= tol * scale
}

/// Orthonormal basis (as 36-vectors) of `Der(alg)`.
#[derive(Debug, Clone)]
pub struct DerivationBasis {
    pub basis: Vec<Mat6>,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ cᵢ Dᵢ`.
    pub fn combine(&self, coeffs: &[f64]) -> Mat6 {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(Mat6::zeros(), |acc, (d, c)| acc + d * *c)
    }
}

/// Matrix of `D ↦ (D[e_i,e_j] − [De_i,e_j] − [e_i,De_j])_{i<j}` on row-major `D`.
pub fn derivation_system(alg: &LieAlgebra) -> DMatrix<f64> {
    let rows = DIM * (DIM - 1) / 2 * DIM;
    let mut sys = DMatrix::zeros(rows, DIM * DIM);
    for r in 0..DIM {
        for c in 0..DIM {
            let mut d = Mat6::zeros();
            d[(r, c)] = 1.0;
            let mut row = 0;
            for i in 0..DIM {
                for j in (i + 1)..DIM {
                    let (ei, ej) = (Vector::ith(i, 1.0), Vector::ith(j, 1.0));
                    let v = d * alg.bracket(&ei, &ej) - alg.bracket(&(d * ei), &ej) - alg.bracket(&ei, &(d * ej));
                    for k in 0..DIM {
                        sys[(row + k, DIM * r + c)] = v[k];
                    }
                    row += DIM;
                }
            }
        }
    }
    sys
}

pub fn derivation_algebra(alg: &LieAlgebra) -> DerivationBasis {
    let ns = null_space(&derivation_system(alg), DERIVATION_TOL);
    let basis = ns.basis.iter().map(|v| Mat6::from_row_slice(v.as_slice())).collect();
    DerivationBasis { basis }
}

/// Max over basis pairs of `‖D[x,y] − [Dx,y] − [x,Dy]‖`.
pub fn derivation_defect(alg: &LieAlgebra, d: &Mat6) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let (ei, ej) = (Vector::ith(i, 1.0), Vector::ith(j, 1.0));
            let v = d * alg.bracket(&ei, &ej) - alg.bracket(&(d * ei), &ej) - alg.bracket(&ei, &(d * ej));
            worst = worst.max(v.norm());
        }
    }
    worst
}

pub fn structured_automorphism(alg: Builtin, p: &StructuredParams) -> Result<Automorphism, AutError> {
    let matrix = forms::build(alg, p)?;
    Ok(Automorphism {
        matrix,
        algebra: alg,
        component: Some(forms::component_index(p)),
    })
}

/// Reads the parameters of `m` under the algebra's shape. The reading is
/// meaningful only when [`matches_theorem_form`] holds.
pub fn structured_params(alg: Builtin, m: &Mat6) -> StructuredParams {
    forms::extract(alg, m)
}

/// Whether `m` fits the zero pattern and dependent-entry relations of the
/// algebra's shape, with tolerance `tol · max(1, ‖m‖_max)`.
pub fn matches_theorem_form(alg: Builtin, m: &Mat6, tol: f64) -> bool {
    let p = forms::extract(alg, m);
    match forms::build(alg, &p) {
        Ok(rebuilt) => (rebuilt - m).amax() <= tol * m.amax().max(1.0),
        Err(_) => false,
    }
}

/// Component label of a matrix of the algebra's shape.
pub fn component_of(alg: Builtin, m: &Mat6) -> Option<usize> {
    if !matches_theorem_form(alg, m, 1e-8) {
        return None;
    }
    Some(forms::component_index(&forms::extract(alg, m)))
}

/// One representative per connected component, ordered by component label.
pub fn component_representatives(alg: &LieAlgebra) -> Result<Vec<Automorphism>, AutError> {
    let label = alg.label().ok_or(AutError::Unsupported("component_representatives"))?;
    let diag = |d: [f64; 6]| Mat6::from_diagonal(&nalgebra::Vector6::from(d));
    let mats: Vec<Mat6> = match label {
        Builtin::H6 => vec![
            diag([1., 1., 1., 1., 1., 1.]),
            diag([1., 1., 1., -1., 1., 1.]),
            diag([1., 1., -1., 1., 1., -1.]),
            diag([1., 1., -1., -1., 1., -1.]),
            diag([-1., 1., 1., 1., -1., -1.]),
            diag([-1., 1., 1., -1., -1., -1.]),
            diag([-1., 1., -1., 1., -1., 1.]),
            diag([-1., 1., -1., -1., -1., 1.]),
        ],
        Builtin::H4 => vec![
            diag([1., 1., 1., 1., 1., 1.]),
            diag([1., -1., 1., -1., -1., -1.]),
            diag([1., 1., -1., -1., 1., -1.]),
            diag([1., -1., -1., 1., -1., 1.]),
        ],
        Builtin::H5 => vec![Mat6::identity(), psi()],
        Builtin::H2 => {
            let p1 = diag([-1., 1., 1., 1., -1., 1.]);
            let p2 = diag([1., 1., -1., 1., 1., -1.]);
            let p3 = h2_swap();
            let base = [Mat6::identity(), p1, p2, p1 * p2];
            base.iter().copied().chain(base.iter().map(|b| p3 * b)).collect()
        }
        Builtin::H9 | Builtin::H9Hat => {
            let mut out = Vec::new();
            for k in 0..8 {
                let e1 = if k & 4 != 0 { -1.0 } else { 1.0 };
                let e2 = if k & 2 != 0 { -1.0 } else { 1.0 };
                let e3 = if k & 1 != 0 { -1.0 } else { 1.0 };
                let hat = diag([e1, e2, 1.0, e3, e1 * e2, e2]);
                out.push(if label == Builtin::H9 {
                    let p = nilmoduli_algebra::hat_permutation();
                    p * hat * p
                } else {
                    hat
                });
            }
            out
        }
    };
    let mut reps: Vec<Automorphism> = mats
        .into_iter()
        .map(|m| Automorphism {
            matrix: m,
            algebra: label,
            component: component_of(label, &m),
        })
        .collect();
    reps.sort_by_key(|a| a.component);
    Ok(reps)
}

/// The involution exchanging `(e1,e2,e5)` with `(e3,e4,e6)` on `h2`.
pub fn h2_swap() -> Mat6 {
    let mut m = Mat6::zeros();
    for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1), (4, 5), (5, 4)] {
        m[(i, j)] = 1.0;
    }
    m
}
