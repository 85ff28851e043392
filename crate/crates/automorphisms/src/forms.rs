//! Parametrized automorphism shapes, one per built-in algebra.

use nalgebra::{Complex, Matrix2, Matrix4, SMatrix, Vector2};
use nilmoduli_algebra::{hat_permutation, Builtin, Mat6};

use crate::AutError;

pub type Block24 = SMatrix<f64, 2, 4>;

/// `[[r,0,0],[x,Ã,0],[z,yᵀ,s]]` on `e1..e4`, `Δ = r Ã`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H6Params {
    pub r: f64,
    pub s: f64,
    pub x: Vector2<f64>,
    pub y: Vector2<f64>,
    pub z: f64,
    pub a_tilde: Matrix2<f64>,
    pub m: Block24,
}

/// `[[A,0],[B,xσ(A)]]` on `e1..e4`, `Δ = [[det A, 0], [(A,B), x det A]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H4Params {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub x: f64,
    pub m: Block24,
}

/// `A = [[z1, z2], [z3, z4]] ∈ GL₂(ℂ)` acting on `ℂ² = (e1 + i e2, e3 + i e4)`,
/// `Δ = det A`; `psi` selects the component of `ψ = diag(1,−1,1,−1,1,−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H5Params {
    pub z: [Complex<f64>; 4],
    pub m: Block24,
    pub psi: bool,
}

/// Block-diagonal (`swap = false`) or block-anti-diagonal shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Params {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub m1: Matrix2<f64>,
    pub m2: Matrix2<f64>,
    pub swap: bool,
}

/// The fifteen free entries of the lower-triangular shape in the hat basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct H9Params {
    pub a11: f64,
    pub a21: f64,
    pub a22: f64,
    pub a31: f64,
    pub a32: f64,
    pub a41: f64,
    pub a42: f64,
    pub a43: f64,
    pub a44: f64,
    pub a51: f64,
    pub a52: f64,
    pub a61: f64,
    pub a62: f64,
    pub a63: f64,
    pub a64: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StructuredParams {
    H6(H6Params),
    H4(H4Params),
    H5(H5Params),
    H2(H2Params),
    H9(H9Params),
}

impl StructuredParams {
    pub fn identity(alg: Builtin) -> Self {
        let i2 = Matrix2::identity();
        match alg {
            Builtin::H6 => StructuredParams::H6(H6Params {
                r: 1.0,
                s: 1.0,
                x: Vector2::zeros(),
                y: Vector2::zeros(),
                z: 0.0,
                a_tilde: i2,
                m: Block24::zeros(),
            }),
            Builtin::H4 => StructuredParams::H4(H4Params {
                a: i2,
                b: Matrix2::zeros(),
                x: 1.0,
                m: Block24::zeros(),
            }),
            Builtin::H5 => StructuredParams::H5(H5Params {
                z: [
                    Complex::new(1.0, 0.0),
                    Complex::new(0.0, 0.0),
                    Complex::new(0.0, 0.0),
                    Complex::new(1.0, 0.0),
                ],
                m: Block24::zeros(),
                psi: false,
            }),
            Builtin::H2 => StructuredParams::H2(H2Params {
                a: i2,
                b: i2,
                m1: Matrix2::zeros(),
                m2: Matrix2::zeros(),
                swap: false,
            }),
            Builtin::H9 | Builtin::H9Hat => StructuredParams::H9(H9Params {
                a11: 1.0,
                a22: 1.0,
                a44: 1.0,
                ..Default::default()
            }),
        }
    }

    fn fits(&self, alg: Builtin) -> bool {
        matches!(
            (self, alg),
            (StructuredParams::H6(_), Builtin::H6)
                | (StructuredParams::H4(_), Builtin::H4)
                | (StructuredParams::H5(_), Builtin::H5)
                | (StructuredParams::H2(_), Builtin::H2)
                | (StructuredParams::H9(_), Builtin::H9 | Builtin::H9Hat)
        )
    }
}

/// `σ([[a,b],[c,d]]) = [[a,−b],[−c,d]]`.
pub fn sigma(a: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(a[(0, 0)], -a[(0, 1)], -a[(1, 0)], a[(1, 1)])
}

/// The pairing fixed by `[φe1, φe2] = −φe5` on `h4`:
/// `(A, B) = a11 b22 − a12 b21 + a21 b12 − a22 b11`.
pub fn h4_pairing(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    a[(0, 0)] * b[(1, 1)] - a[(0, 1)] * b[(1, 0)] + a[(1, 0)] * b[(0, 1)] - a[(1, 1)] * b[(0, 0)]
}

/// Real 2×2 matrix of multiplication by `w` on `ℂ = ℝ²`.
pub fn complex_block(w: Complex<f64>) -> Matrix2<f64> {
    Matrix2::new(w.re, -w.im, w.im, w.re)
}

pub fn psi() -> Mat6 {
    Mat6::from_diagonal(&nalgebra::Vector6::new(1.0, -1.0, 1.0, -1.0, 1.0, -1.0))
}

fn assemble(a4: &Matrix4<f64>, m: &Block24, delta: &Matrix2<f64>) -> Mat6 {
    let mut out = Mat6::zeros();
    out.fixed_view_mut::<4, 4>(0, 0).copy_from(a4);
    out.fixed_view_mut::<2, 4>(4, 0).copy_from(m);
    out.fixed_view_mut::<2, 2>(4, 4).copy_from(delta);
    out
}

fn nonzero(v: f64, what: &'static str) -> Result<(), AutError> {
    if v != 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AutError::DegenerateParams(what))
    }
}

fn build_h6(p: &H6Params) -> Result<Mat6, AutError> {
    nonzero(p.r, "r ≠ 0")?;
    nonzero(p.s, "s ≠ 0")?;
    nonzero(p.a_tilde.determinant(), "det Ã ≠ 0")?;
    let mut a4 = Matrix4::zeros();
    a4[(0, 0)] = p.r;
    a4[(1, 0)] = p.x[0];
    a4[(2, 0)] = p.x[1];
    a4.fixed_view_mut::<2, 2>(1, 1).copy_from(&p.a_tilde);
    a4[(3, 0)] = p.z;
    a4[(3, 1)] = p.y[0];
    a4[(3, 2)] = p.y[1];
    a4[(3, 3)] = p.s;
    Ok(assemble(&a4, &p.m, &(p.a_tilde * p.r)))
}

fn build_h4(p: &H4Params) -> Result<Mat6, AutError> {
    let det = p.a.determinant();
    nonzero(det, "det A ≠ 0")?;
    nonzero(p.x, "x ≠ 0")?;
    let mut a4 = Matrix4::zeros();
    a4.fixed_view_mut::<2, 2>(0, 0).copy_from(&p.a);
    a4.fixed_view_mut::<2, 2>(2, 0).copy_from(&p.b);
    a4.fixed_view_mut::<2, 2>(2, 2).copy_from(&(sigma(&p.a) * p.x));
    let delta = Matrix2::new(det, 0.0, h4_pairing(&p.a, &p.b), p.x * det);
    Ok(assemble(&a4, &p.m, &delta))
}

fn build_h5(p: &H5Params) -> Result<Mat6, AutError> {
    let [z1, z2, z3, z4] = p.z;
    let det = z1 * z4 - z2 * z3;
    nonzero(det.norm(), "det_ℂ A ≠ 0")?;
    let mut a4 = Matrix4::zeros();
    for (k, z) in p.z.iter().enumerate() {
        let (r, c) = (2 * (k / 2), 2 * (k % 2));
        a4.fixed_view_mut::<2, 2>(r, c).copy_from(&complex_block(*z));
    }
    let phi = assemble(&a4, &p.m, &complex_block(det));
    Ok(if p.psi { psi() * phi } else { phi })
}

fn build_h2(p: &H2Params) -> Result<Mat6, AutError> {
    let (da, db) = (p.a.determinant(), p.b.determinant());
    nonzero(da * db, "det A · det B ≠ 0")?;
    let mut out = Mat6::zeros();
    if p.swap {
        out.fixed_view_mut::<2, 2>(0, 2).copy_from(&p.a);
        out.fixed_view_mut::<2, 2>(2, 0).copy_from(&p.b);
        out[(4, 5)] = da;
        out[(5, 4)] = db;
    } else {
        out.fixed_view_mut::<2, 2>(0, 0).copy_from(&p.a);
        out.fixed_view_mut::<2, 2>(2, 2).copy_from(&p.b);
        out[(4, 4)] = da;
        out[(5, 5)] = db;
    }
    out.fixed_view_mut::<2, 2>(4, 0).copy_from(&p.m1);
    out.fixed_view_mut::<2, 2>(4, 2).copy_from(&p.m2);
    Ok(out)
}

fn build_h9_hat(p: &H9Params) -> Result<Mat6, AutError> {
    nonzero(p.a11 * p.a22 * p.a44, "a11 · a22 · a44 ≠ 0")?;
    #[rustfmt::skip]
    let m = Mat6::from_row_slice(&[
        p.a11, 0.0, 0.0, 0.0, 0.0, 0.0,
        p.a21, p.a22, 0.0, 0.0, 0.0, 0.0,
        p.a31, p.a32, p.a11 * p.a11, 0.0, 0.0, 0.0,
        p.a41, p.a42, p.a43, p.a44, 0.0, 0.0,
        p.a51, p.a52, -p.a11 * p.a21, 0.0, p.a11 * p.a22, 0.0,
        p.a61, p.a62, p.a63, p.a64,
        p.a22 * p.a31 - p.a21 * p.a32 - p.a11 * p.a52, p.a11 * p.a11 * p.a22,
    ]);
    Ok(m)
}

/// Matrix of the parametrized automorphism in the algebra's working basis.
pub fn build(alg: Builtin, p: &StructuredParams) -> Result<Mat6, AutError> {
    if !p.fits(alg) {
        return Err(AutError::Mismatch(alg));
    }
    match p {
        StructuredParams::H6(q) => build_h6(q),
        StructuredParams::H4(q) => build_h4(q),
        StructuredParams::H5(q) => build_h5(q),
        StructuredParams::H2(q) => build_h2(q),
        StructuredParams::H9(q) => {
            let hat = build_h9_hat(q)?;
            Ok(if alg == Builtin::H9 {
                let p = hat_permutation();
                p * hat * p
            } else {
                hat
            })
        }
    }
}

fn block24(m: &Mat6) -> Block24 {
    m.fixed_view::<2, 4>(4, 0).into_owned()
}

/// Reads the free parameters off `m`, ignoring whether dependent entries
/// and zero patterns hold.
pub fn extract(alg: Builtin, m: &Mat6) -> StructuredParams {
    match alg {
        Builtin::H6 => StructuredParams::H6(H6Params {
            r: m[(0, 0)],
            s: m[(3, 3)],
            x: Vector2::new(m[(1, 0)], m[(2, 0)]),
            y: Vector2::new(m[(3, 1)], m[(3, 2)]),
            z: m[(3, 0)],
            a_tilde: m.fixed_view::<2, 2>(1, 1).into_owned(),
            m: block24(m),
        }),
        Builtin::H4 => {
            let a: Matrix2<f64> = m.fixed_view::<2, 2>(0, 0).into_owned();
            let c: Matrix2<f64> = m.fixed_view::<2, 2>(2, 2).into_owned();
            let sa = sigma(&a);
            let n = sa.norm_squared();
            let x = if n > 0.0 { sa.dot(&c) / n } else { 0.0 };
            StructuredParams::H4(H4Params {
                a,
                b: m.fixed_view::<2, 2>(2, 0).into_owned(),
                x,
                m: block24(m),
            })
        }
        Builtin::H5 => {
            // ψ commutes with the complex-linear part only up to conjugation,
            // so pick the component whose reading is complex-linear
            let linear_defect = |q: &Mat6| {
                let mut d = 0.0_f64;
                for (r, c) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
                    d = d.max((q[(r, c)] - q[(r + 1, c + 1)]).abs());
                    d = d.max((q[(r, c + 1)] + q[(r + 1, c)]).abs());
                }
                d
            };
            let flipped = psi() * m;
            let use_psi = linear_defect(&flipped) < linear_defect(m);
            let q = if use_psi { flipped } else { *m };
            let z = |r: usize, c: usize| Complex::new(q[(r, c)], q[(r + 1, c)]);
            StructuredParams::H5(H5Params {
                z: [z(0, 0), z(0, 2), z(2, 0), z(2, 2)],
                m: block24(&q),
                psi: use_psi,
            })
        }
        Builtin::H2 => {
            let diag = m.fixed_view::<2, 2>(0, 0).amax() + m.fixed_view::<2, 2>(2, 2).amax();
            let anti = m.fixed_view::<2, 2>(0, 2).amax() + m.fixed_view::<2, 2>(2, 0).amax();
            let swap = anti > diag;
            let (a, b) = if swap {
                (
                    m.fixed_view::<2, 2>(0, 2).into_owned(),
                    m.fixed_view::<2, 2>(2, 0).into_owned(),
                )
            } else {
                (
                    m.fixed_view::<2, 2>(0, 0).into_owned(),
                    m.fixed_view::<2, 2>(2, 2).into_owned(),
                )
            };
            StructuredParams::H2(H2Params {
                a,
                b,
                m1: m.fixed_view::<2, 2>(4, 0).into_owned(),
                m2: m.fixed_view::<2, 2>(4, 2).into_owned(),
                swap,
            })
        }
        Builtin::H9 | Builtin::H9Hat => {
            let q = if alg == Builtin::H9 {
                let p = hat_permutation();
                p * m * p
            } else {
                *m
            };
            StructuredParams::H9(H9Params {
                a11: q[(0, 0)],
                a21: q[(1, 0)],
                a22: q[(1, 1)],
                a31: q[(2, 0)],
                a32: q[(2, 1)],
                a41: q[(3, 0)],
                a42: q[(3, 1)],
                a43: q[(3, 2)],
                a44: q[(3, 3)],
                a51: q[(4, 0)],
                a52: q[(4, 1)],
                a61: q[(5, 0)],
                a62: q[(5, 1)],
                a63: q[(5, 2)],
                a64: q[(5, 3)],
            })
        }
    }
}

/// Discrete invariant naming the connected component, in `0..count`.
///
/// h6: `4[r<0] + 2[det Ã<0] + [s<0]`; h4: `2[x<0] + [det A<0]`;
/// h5: `[ψ]`; h2: `4[swap] + 2[det B<0] + [det A<0]`;
/// h9: `4[a11<0] + 2[a22<0] + [a44<0]`.
pub fn component_index(p: &StructuredParams) -> usize {
    let neg = |v: f64| usize::from(v < 0.0);
    match p {
        StructuredParams::H6(q) => 4 * neg(q.r) + 2 * neg(q.a_tilde.determinant()) + neg(q.s),
        StructuredParams::H4(q) => 2 * neg(q.x) + neg(q.a.determinant()),
        StructuredParams::H5(q) => usize::from(q.psi),
        StructuredParams::H2(q) => 4 * usize::from(q.swap) + 2 * neg(q.b.determinant()) + neg(q.a.determinant()),
        StructuredParams::H9(q) => 4 * neg(q.a11) + 2 * neg(q.a22) + neg(q.a44),
    }
}

pub fn component_count(alg: Builtin) -> usize {
    match alg {
        Builtin::H5 => 2,
        Builtin::H4 => 4,
        Builtin::H6 | Builtin::H2 | Builtin::H9 | Builtin::H9Hat => 8,
    }
}
