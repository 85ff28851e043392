use crate::algebra::{Builtin, LieAlgebra, DIM};
use crate::{AlgebraError, Mat6, Vector};

/// Bound on `‖J² + I‖_max`, relative to `max(1, ‖J‖²_max)`.
pub const INVOLUTION_TOL: f64 = 1e-12;

/// A 6×6 matrix with `J² = −I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostComplexStructure {
    matrix: Mat6,
    algebra: Option<Builtin>,
}

impl AlmostComplexStructure {
    pub fn new(matrix: Mat6, algebra: Option<Builtin>) -> Result<Self, AlgebraError> {
        let res = involution_residual(&matrix);
        let scale = matrix.amax().powi(2).max(1.0);
        if !(res <= INVOLUTION_TOL * scale) {
            return Err(AlgebraError::NotInvolutive(res));
        }
        Ok(Self { matrix, algebra })
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.matrix
    }

    pub fn algebra(&self) -> Option<Builtin> {
        self.algebra
    }

    /// `−J`, again an almost complex structure.
    pub fn negate(&self) -> Self {
        Self {
            matrix: -self.matrix,
            algebra: self.algebra,
        }
    }

    /// `φ J φ⁻¹`.
    pub fn conjugate(&self, phi: &Mat6) -> Result<Self, AlgebraError> {
        let inv = phi.try_inverse().ok_or(AlgebraError::SingularMatrix)?;
        Self::new(phi * self.matrix * inv, self.algebra)
    }

    /// `‖J² + I‖_max`.
    pub fn involution_residual(&self) -> f64 {
        involution_residual(&self.matrix)
    }

    /// `‖Jᵀ g J − g‖_max`.
    pub fn compatibility_residual(&self, g: &Mat6) -> f64 {
        (self.matrix.transpose() * g * self.matrix - g).amax()
    }
}

impl AsRef<Mat6> for AlmostComplexStructure {
    fn as_ref(&self) -> &Mat6 {
        &self.matrix
    }
}

fn involution_residual(j: &Mat6) -> f64 {
    (j * j + Mat6::identity()).amax()
}

/// `N_J(X, Y) = [JX, JY] − J[JX, Y] − J[X, JY] − [X, Y]`.
pub fn nijenhuis(alg: &LieAlgebra, j: &Mat6, x: &Vector, y: &Vector) -> Vector {
    let jx = j * x;
    let jy = j * y;
    alg.bracket(&jx, &jy) - j * alg.bracket(&jx, y) - j * alg.bracket(x, &jy) - alg.bracket(x, y)
}

/// Max over basis pairs of the Euclidean norm of `N_J(e_i, e_j)`.
pub fn nijenhuis_residual(alg: &LieAlgebra, j: &Mat6) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for k in (i + 1)..DIM {
            let n = nijenhuis(alg, j, &Vector::ith(i, 1.0), &Vector::ith(k, 1.0));
            worst = worst.max(n.norm());
        }
    }
    worst
}

/// Whether `[JX, JY] = [X, Y]` on all basis pairs, within `tol`.
pub fn is_abelian_structure(alg: &LieAlgebra, j: &Mat6, tol: f64) -> bool {
    for i in 0..DIM {
        for k in (i + 1)..DIM {
            let (x, y) = (Vector::ith(i, 1.0), Vector::ith(k, 1.0));
            let d = alg.bracket(&(j * x), &(j * y)) - alg.bracket(&x, &y);
            if d.norm() > tol {
                return false;
            }
        }
    }
    true
}
