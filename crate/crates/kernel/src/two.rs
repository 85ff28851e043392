use nalgebra::{Matrix2, Vector2};

/// Counter-clockwise rotation by `t`.
pub fn rotation(t: f64) -> Matrix2<f64> {
    let (s, c) = t.sin_cos();
    Matrix2::new(c, -s, s, c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eig2 {
    /// Ascending eigenvalues.
    pub values: Vector2<f64>,
    /// Rotation whose columns are the matching eigenvectors.
    pub vectors: Matrix2<f64>,
    /// Angle of `vectors`, in `(−π/2, π/2]`.
    pub angle: f64,
}

/// Closed-form spectral decomposition of a symmetric 2×2 matrix.
///
/// Reads the upper triangle. Returns `R ∈ SO(2)` with
/// `Rᵀ A R = diag(λ1, λ2)`, `λ1 ≤ λ2`.
pub fn sym_eig2(a: &Matrix2<f64>) -> Eig2 {
    let (p, q, r) = (a[(0, 0)], a[(0, 1)], a[(1, 1)]);
    let mean = 0.5 * (p + r);
    let half = 0.5 * (p - r);
    let rad = half.hypot(q);
    // direction of the larger eigenvalue, then turn a quarter
    let mut angle = if rad == 0.0 {
        0.0
    } else {
        0.5 * q.atan2(half) + std::f64::consts::FRAC_PI_2
    };
    if angle > std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    }
    if angle <= -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    }
    Eig2 {
        values: Vector2::new(mean - rad, mean + rad),
        vectors: rotation(angle),
        angle,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub u: Matrix2<f64>,
    /// Ascending, non-negative.
    pub values: Vector2<f64>,
    pub v: Matrix2<f64>,
}

/// Closed-form singular value decomposition `Uᵀ Q V = diag(s1, s2)`.
///
/// `U` is always a rotation; any reflection needed is carried by `V`.
pub fn svd2(m: &Matrix2<f64>) -> Svd2 {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (c + b);
    let h = 0.5 * (c - b);
    let qn = e.hypot(h);
    let rn = f.hypot(g);
    let sx = qn + rn;
    let sy = qn - rn;
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    // m = R(φ) diag(sx, sy) R(θ)
    let u0 = rotation(phi);
    let mut v0 = rotation(-theta);
    if sy < 0.0 {
        v0[(0, 1)] = -v0[(0, 1)];
        v0[(1, 1)] = -v0[(1, 1)];
    }
    // reorder to ascending while keeping det U = +1
    let u = Matrix2::new(u0[(0, 1)], -u0[(0, 0)], u0[(1, 1)], -u0[(1, 0)]);
    let v = Matrix2::new(v0[(0, 1)], -v0[(0, 0)], v0[(1, 1)], -v0[(1, 0)]);
    Svd2 {
        u,
        values: Vector2::new(sy.abs(), sx),
        v,
    }
}
