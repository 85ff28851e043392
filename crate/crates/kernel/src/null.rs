use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis vectors.
    pub basis: Vec<DVector<f64>>,
    /// Largest singular value of the input.
    pub s_max: f64,
    /// Smallest singular value kept out of the kernel, `∞` if none.
    pub gap: f64,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of `m` with singular-value cutoff `tol · s_max`.
///
/// A zero matrix has the whole space as kernel.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> NullSpace {
    let (rows, cols) = m.shape();
    // pad to at least square so the SVD returns a full right basis
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let s_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * s_max;
    let mut basis = Vec::new();
    let mut gap = f64::INFINITY;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            basis.push(v_t.row(k).transpose());
        } else {
            gap = gap.min(s);
        }
    }
    NullSpace { basis, s_max, gap }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        assert_eq!(null_space(&DMatrix::identity(4, 4), 1e-10).dim(), 0);
    }

    #[test]
    fn zero_map_has_full_kernel() {
        assert_eq!(null_space(&DMatrix::zeros(2, 3), 1e-10).dim(), 3);
    }

    #[test]
    fn rank_one() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.dim(), 2);
        for v in &ns.basis {
            assert!((&m * v).amax() <= 10.0 * 1e-10 * ns.s_max);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        assert!(ns.basis[0].dot(&ns.basis[1]).abs() < 1e-14);
    }
}
