use nalgebra::SMatrix;

const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// Matrix exponential by scaling and squaring with a diagonal Padé(6,6)
/// approximant.
pub fn expm<const N: usize>(a: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    let norm = a
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let x = a / 2f64.powi(squarings as i32);
    let id = SMatrix::<f64, N, N>::identity();
    let mut num = id * PADE6[0];
    let mut den = id * PADE6[0];
    let mut power = id;
    for (k, c) in PADE6.iter().enumerate().skip(1) {
        power *= x;
        num += power * *c;
        den += power * if k % 2 == 0 { *c } else { -*c };
    }
    let mut e = solve(den, num);
    for _ in 0..squarings {
        e = e * e;
    }
    e
}

/// Gaussian elimination with partial pivoting; `den` is well conditioned here.
fn solve<const N: usize>(mut a: SMatrix<f64, N, N>, mut b: SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
            .unwrap_or(col);
        a.swap_rows(col, pivot);
        b.swap_rows(col, pivot);
        let d = a[(col, col)];
        for row in (col + 1)..N {
            let f = a[(row, col)] / d;
            if f != 0.0 {
                for k in col..N {
                    a[(row, k)] -= f * a[(col, k)];
                }
                for k in 0..N {
                    b[(row, k)] -= f * b[(col, k)];
                }
            }
        }
    }
    for col in (0..N).rev() {
        let d = a[(col, col)];
        for k in 0..N {
            let mut s = b[(col, k)];
            for j in (col + 1)..N {
                s -= a[(col, j)] * b[(j, k)];
            }
            b[(col, k)] = s / d;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Matrix3};

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&Matrix3::<f64>::zeros()), Matrix3::identity());
    }

    #[test]
    fn rotation_generator() {
        let t = 2.5;
        let e = expm(&Matrix2::new(0.0, -t, t, 0.0));
        let r = crate::rotation(t);
        assert!((e - r).abs().max() < 1e-14);
    }

    #[test]
    fn nilpotent_is_polynomial() {
        let n = Matrix3::new(0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 1.0, 2.0, 0.0);
        let exact = Matrix3::identity() + n + n * n * 0.5;
        assert!((expm(&n) - exact).abs().max() < 1e-13);
    }

    #[test]
    fn diagonal_scaling() {
        let e = expm(&Matrix2::new(3.0, 0.0, 0.0, -1.0));
        assert!((e[(0, 0)] - 3f64.exp()).abs() < 1e-13 * 3f64.exp());
        assert!((e[(1, 1)] - (-1f64).exp()).abs() < 1e-15);
    }
}
