use nalgebra::SMatrix;

use crate::{max_abs, KernelError};

/// Lower-triangular `L` with positive diagonal and `L Lᵀ = A`.
///
/// Only the lower triangle of `a` is read. A pivot at or below
/// `n·ε·‖A‖_max` is reported as [`KernelError::NotSpd`].
pub fn cholesky_lower<const N: usize>(a: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>, KernelError> {
    let threshold = N as f64 * f64::EPSILON * max_abs(a);
    let mut l = SMatrix::<f64, N, N>::zeros();
    for j in 0..N {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > threshold) {
            return Err(KernelError::NotSpd { index: j, pivot: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..N {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Lower-triangular `X` with positive diagonal and `Xᵀ X = A`.
///
/// This is the factorization matching the right action `X ↦ X φ` of
/// lower-triangular groups on `Sym⁺` through `X ↦ XᵀX`.
pub fn reverse_cholesky<const N: usize>(a: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>, KernelError> {
    let flip = |m: &SMatrix<f64, N, N>| SMatrix::<f64, N, N>::from_fn(|i, j| m[(N - 1 - i, N - 1 - j)]);
    let l = cholesky_lower(&flip(a)).map_err(|e| match e {
        KernelError::NotSpd { index, pivot } => KernelError::NotSpd {
            index: N - 1 - index,
            pivot,
        },
        other => other,
    })?;
    // flip(a) = L Lᵀ  ⇒  a = flip(L) flip(L)ᵀ with flip(L) upper.
    Ok(flip(&l).transpose())
}

pub fn is_spd<const N: usize>(a: &SMatrix<f64, N, N>) -> bool {
    cholesky_lower(a).is_ok()
}
