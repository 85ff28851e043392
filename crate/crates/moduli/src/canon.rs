use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};
use nilmoduli_algebra::{hat_permutation, Builtin, Mat6};
use nilmoduli_automorphisms::{
    component_of, h2_swap, psi, structured_automorphism, Automorphism, Block24, H2Params, H4Params, H5Params, H6Params,
    H9Params, StructuredParams,
};
use nilmoduli_kernel::{cholesky_lower, reverse_cholesky, svd2, sym_eig2};

use crate::{realize, CanonicalForm, Metric, ModuliError, Witness, WITNESS_TOL};

type C64 = Complex<f64>;

/// Below this, `a` on `h2` is treated as zero.
const H2_ZERO: f64 = 1e-12;

/// Within this of 1, `r` on `h5` is snapped to 1.
const H5_UNIT: f64 = 1e-9;

/// Running pullback `g ← φᵀ g φ` with the accumulated product of steps.
struct Walk {
    alg: Builtin,
    g: Mat6,
    phi: Mat6,
}

impl Walk {
    fn new(g: &Metric) -> Self {
        Self {
            alg: g.algebra(),
            g: *g.matrix(),
            phi: Mat6::identity(),
        }
    }

    fn apply(&mut self, step: &Mat6) {
        let g = step.transpose() * self.g * step;
        self.g = (g + g.transpose()) * 0.5;
        self.phi *= step;
    }

    fn apply_params(&mut self, p: StructuredParams) -> Result<(), ModuliError> {
        let step = structured_automorphism(self.alg, &p).map_err(|_| ModuliError::CanonicalizationFailed {
            residual: f64::INFINITY,
        })?;
        self.apply(&step.matrix);
        Ok(())
    }

    fn p4(&self) -> Matrix4<f64> {
        self.g.fixed_view::<4, 4>(0, 0).into_owned()
    }

    fn d(&self) -> Matrix2<f64> {
        self.g.fixed_view::<2, 2>(4, 4).into_owned()
    }

    /// `M = −D⁻¹C`, the translation clearing the mixed block.
    fn clearing_block(&self) -> Result<Block24, ModuliError> {
        let c: Block24 = self.g.fixed_view::<2, 4>(4, 0).into_owned();
        let d_inv = self.d().try_inverse().ok_or(ModuliError::NotSpd)?;
        Ok(-d_inv * c)
    }
}

/// Canonical representative of the orbit of `g`, with a witness.
pub fn canonicalize(g: &Metric) -> Result<(CanonicalForm, Witness), ModuliError> {
    let alg = g.algebra();
    let (form, phi) = match alg {
        Builtin::H6 => h6(g)?,
        Builtin::H4 => h4(g)?,
        Builtin::H5 => h5(g)?,
        Builtin::H2 => h2(g)?,
        Builtin::H9 | Builtin::H9Hat => h9(g)?,
    };
    let witness = phi.try_inverse().ok_or(ModuliError::CanonicalizationFailed {
        residual: f64::INFINITY,
    })?;
    let canonical = realize(alg, &form).map_err(|_| ModuliError::CanonicalizationFailed {
        residual: f64::INFINITY,
    })?;
    let residual = (witness.transpose() * canonical.matrix() * witness - g.matrix()).amax();
    if !(residual <= WITNESS_TOL * g.matrix().amax().max(1.0)) {
        return Err(ModuliError::CanonicalizationFailed { residual });
    }
    let automorphism = Automorphism {
        matrix: witness,
        algebra: alg,
        component: component_of(alg, &witness),
    };
    Ok((form, Witness { automorphism, residual }))
}

fn not_spd(_: nilmoduli_kernel::KernelError) -> ModuliError {
    ModuliError::NotSpd
}

fn h6_params(a4: &Matrix4<f64>, m: Block24) -> StructuredParams {
    StructuredParams::H6(H6Params {
        r: a4[(0, 0)],
        s: a4[(3, 3)],
        x: a4.fixed_view::<2, 1>(1, 0).into_owned(),
        y: a4.fixed_view::<1, 2>(3, 1).transpose(),
        z: a4[(3, 0)],
        a_tilde: a4.fixed_view::<2, 2>(1, 1).into_owned(),
        m,
    })
}

fn h6(g: &Metric) -> Result<(CanonicalForm, Mat6), ModuliError> {
    let mut w = Walk::new(g);
    let m = w.clearing_block()?;
    w.apply_params(h6_params(&Matrix4::identity(), m))?;
    // XᵀX = B with X lower triangular, so X⁻¹ lies in the shape and sends B to I
    let x = reverse_cholesky(&w.p4()).map_err(not_spd)?;
    let l = x.try_inverse().ok_or(ModuliError::NotSpd)?;
    w.apply_params(h6_params(&l, Block24::zeros()))?;
    let eig = sym_eig2(&w.d());
    let mut rot = Matrix4::identity();
    rot.fixed_view_mut::<2, 2>(1, 1).copy_from(&eig.vectors);
    w.apply_params(h6_params(&rot, Block24::zeros()))?;
    let (a, b) = (w.g[(4, 4)], w.g[(5, 5)]);
    Ok((
        CanonicalForm::H6 {
            a: a.min(b),
            b: a.max(b),
        },
        w.phi,
    ))
}

fn h4_step(a: Matrix2<f64>, b: Matrix2<f64>, x: f64, m: Block24) -> StructuredParams {
    StructuredParams::H4(H4Params { a, b, x, m })
}

fn h4(g: &Metric) -> Result<(CanonicalForm, Mat6), ModuliError> {
    let i2 = Matrix2::identity();
    let mut w = Walk::new(g);
    let m = w.clearing_block()?;
    w.apply_params(h4_step(i2, Matrix2::zeros(), 1.0, m))?;
    let p4 = w.p4();
    let q: Matrix2<f64> = p4.fixed_view::<2, 2>(0, 2).into_owned();
    let r: Matrix2<f64> = p4.fixed_view::<2, 2>(2, 2).into_owned();
    let b = -r.try_inverse().ok_or(ModuliError::NotSpd)? * q.transpose();
    w.apply_params(h4_step(i2, b, 1.0, Block24::zeros()))?;
    let p: Matrix2<f64> = w.p4().fixed_view::<2, 2>(0, 0).into_owned();
    let l = cholesky_lower(&p).map_err(not_spd)?;
    let a = l.transpose().try_inverse().ok_or(ModuliError::NotSpd)?;
    w.apply_params(h4_step(a, Matrix2::zeros(), 1.0, Block24::zeros()))?;
    // σ(A) diagonalizes the second block with the larger eigenvalue first
    let r: Matrix2<f64> = w.p4().fixed_view::<2, 2>(2, 2).into_owned();
    let eig = sym_eig2(&r);
    let quarter = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let sa = eig.vectors * quarter;
    let x = 1.0 / eig.values[1].sqrt();
    w.apply_params(h4_step(
        nilmoduli_automorphisms::sigma(&sa),
        Matrix2::zeros(),
        x,
        Block24::zeros(),
    ))?;
    if w.g[(4, 5)] < 0.0 {
        w.apply_params(h4_step(i2, Matrix2::zeros(), -1.0, Block24::zeros()))?;
    }
    let r = w.g[(3, 3)].min(1.0);
    let form = CanonicalForm::H4 {
        r,
        a: w.g[(4, 4)],
        b: w.g[(4, 5)].max(0.0),
        c: w.g[(5, 5)],
    };
    Ok((form, w.phi))
}

fn h2_step(a: Matrix2<f64>, b: Matrix2<f64>, m1: Matrix2<f64>, m2: Matrix2<f64>) -> StructuredParams {
    StructuredParams::H2(H2Params {
        a,
        b,
        m1,
        m2,
        swap: false,
    })
}

fn h2(g: &Metric) -> Result<(CanonicalForm, Mat6), ModuliError> {
    let (i2, z2) = (Matrix2::identity(), Matrix2::zeros());
    let mut w = Walk::new(g);
    let m = w.clearing_block()?;
    let m1 = m.fixed_view::<2, 2>(0, 0).into_owned();
    let m2 = m.fixed_view::<2, 2>(0, 2).into_owned();
    w.apply_params(h2_step(i2, i2, m1, m2))?;
    let p4 = w.p4();
    let inv_factor = |blk: Matrix2<f64>| -> Result<Matrix2<f64>, ModuliError> {
        let l = cholesky_lower(&blk).map_err(not_spd)?;
        l.transpose().try_inverse().ok_or(ModuliError::NotSpd)
    };
    let a = inv_factor(p4.fixed_view::<2, 2>(0, 0).into_owned())?;
    let b = inv_factor(p4.fixed_view::<2, 2>(2, 2).into_owned())?;
    w.apply_params(h2_step(a, b, z2, z2))?;
    let q: Matrix2<f64> = w.p4().fixed_view::<2, 2>(0, 2).into_owned();
    let svd = svd2(&q);
    w.apply_params(h2_step(svd.u, svd.v, z2, z2))?;
    if w.g[(4, 4)] > w.g[(5, 5)] {
        w.apply(&h2_swap());
    }
    let zero_a = w.g[(0, 2)].abs() <= H2_ZERO;
    if zero_a && w.g[(4, 5)] < 0.0 {
        w.apply_params(h2_step(Matrix2::new(-1.0, 0.0, 0.0, 1.0), i2, z2, z2))?;
    }
    let a = if zero_a { 0.0 } else { w.g[(0, 2)] };
    let b = w.g[(1, 3)].max(a);
    let (e, gg) = (w.g[(4, 4)], w.g[(5, 5)]);
    let f = if zero_a { w.g[(4, 5)].max(0.0) } else { w.g[(4, 5)] };
    Ok((
        CanonicalForm::H2 {
            a,
            b,
            e: e.min(gg),
            f,
            g: e.max(gg),
        },
        w.phi,
    ))
}

fn complex_matrix_params(a: &Matrix2<C64>, m: Block24, psi: bool) -> StructuredParams {
    StructuredParams::H5(H5Params {
        z: [a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]],
        m,
        psi,
    })
}

/// Splits a real quadratic form on `ℂ² = ℝ⁴` as `Re(w* h w) + Re(wᵀ β w)`.
fn hermitian_split(p: &Matrix4<f64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let j = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let mut j0 = Matrix4::zeros();
    j0.fixed_view_mut::<2, 2>(0, 0).copy_from(&j);
    j0.fixed_view_mut::<2, 2>(2, 2).copy_from(&j);
    let rot = j0.transpose() * p * j0;
    let inv = (p + rot) * 0.5;
    let anti = (p - rot) * 0.5;
    // f_k = e_{2k}, J0 f_k = e_{2k+1}
    let h = Matrix2::from_fn(|a, b| C64::new(inv[(2 * a, 2 * b)], -inv[(2 * a, 2 * b + 1)]));
    let beta = Matrix2::from_fn(|a, b| C64::new(anti[(2 * a, 2 * b)], -anti[(2 * a, 2 * b + 1)]));
    (h, beta)
}

fn h5(g: &Metric) -> Result<(CanonicalForm, Mat6), ModuliError> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut w = Walk::new(g);
    let m = w.clearing_block()?;
    w.apply_params(complex_matrix_params(&Matrix2::identity(), m, false))?;

    // h ↦ a* h a, β ↦ aᵀ β a
    let (h, beta) = hermitian_split(&w.p4());
    let l11 = h[(0, 0)].re.sqrt();
    let l21 = h[(1, 0)] / l11;
    let l22 = (h[(1, 1)].re - l21.norm_sqr()).sqrt();
    if !(l11 > 0.0 && l22 > 0.0) {
        return Err(ModuliError::NotSpd);
    }
    let l = Matrix2::new(C64::from(l11), zero, l21, C64::from(l22));
    let a1 = l.adjoint().try_inverse().ok_or(ModuliError::NotSpd)?;
    let beta1 = a1.transpose() * beta * a1;

    // Takagi factorization through the real symmetric embedding
    let mut t = Matrix4::zeros();
    let (re, im) = (beta1.map(|z| z.re), beta1.map(|z| z.im));
    t.fixed_view_mut::<2, 2>(0, 0).copy_from(&re);
    t.fixed_view_mut::<2, 2>(0, 2).copy_from(&im);
    t.fixed_view_mut::<2, 2>(2, 0).copy_from(&im);
    t.fixed_view_mut::<2, 2>(2, 2).copy_from(&(-re));
    let t = (t + t.transpose()) * 0.5;
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let (small, large) = (order[2], order[3]);
    let col = |k: usize| {
        let v = eig.eigenvectors.column(k);
        [C64::new(v[0], v[2]), C64::new(v[1], v[3])]
    };
    let (v1, v2) = (col(small), col(large));
    let vmat = Matrix2::new(v1[0], v2[0], v1[1], v2[1]);
    let a2 = vmat.map(|z| z.conj());
    let sigma = [eig.eigenvalues[small].max(0.0), eig.eigenvalues[large].max(0.0)];
    let a3 = Matrix2::new(
        C64::from(1.0 / (1.0 + sigma[0]).sqrt()),
        zero,
        zero,
        C64::from(1.0 / (1.0 + sigma[1]).sqrt()),
    );
    w.apply_params(complex_matrix_params(&(a1 * a2 * a3), Block24::zeros(), false))?;

    let mut r = w.g[(1, 1)];
    let s = w.g[(3, 3)];
    if (r - 1.0).abs() <= H5_UNIT {
        // det of diag(e^{iθ}, 1) rotates the last block freely
        r = 1.0;
        let eig = sym_eig2(&w.d());
        let (c, sn) = (eig.vectors[(0, 0)], eig.vectors[(1, 0)]);
        let a = Matrix2::new(C64::new(c, sn), zero, zero, one);
        w.apply_params(complex_matrix_params(&a, Block24::zeros(), false))?;
    }
    if w.g[(4, 5)] < 0.0 {
        w.apply(&psi());
    }
    let r = r.min(1.0);
    let s = s.min(r);
    let (e, gg) = (w.g[(4, 4)], w.g[(5, 5)]);
    let f = w.g[(4, 5)].max(0.0);
    let form = if r == 1.0 {
        CanonicalForm::H5 {
            r,
            s,
            e: e.min(gg),
            f: 0.0,
            g: e.max(gg),
        }
    } else {
        CanonicalForm::H5 { r, s, e, f, g: gg }
    };
    Ok((form, w.phi))
}

fn h9(g: &Metric) -> Result<(CanonicalForm, Mat6), ModuliError> {
    let p = hat_permutation();
    let standard = g.algebra() == Builtin::H9;
    let gh = if standard { p * g.matrix() * p } else { *g.matrix() };
    let x = reverse_cholesky(&gh).map_err(not_spd)?;
    let xe = |i: usize, j: usize| x[(i - 1, j - 1)];

    // X = S φ, solved row by row
    let a11 = xe(1, 1);
    let (a21, a22) = (xe(2, 1), xe(2, 2));
    let big_a = xe(3, 3) / (a11 * a11);
    let (a31, a32) = (xe(3, 1) / big_a, xe(3, 2) / big_a);
    let (a41, a42, a43, a44) = (xe(4, 1), xe(4, 2), xe(4, 3), xe(4, 4));
    let big_b = xe(5, 5) / (a11 * a22);
    let big_e = xe(5, 4) / a44;
    let big_d = (xe(5, 3) - big_e * a43 + big_b * a11 * a21) / (a11 * a11);
    let a51 = (xe(5, 1) - big_d * a31 - big_e * a41) / big_b;
    let a52 = (xe(5, 2) - big_d * a32 - big_e * a42) / big_b;
    let big_c = xe(6, 6) / (a11 * a11 * a22);
    let a65 = a22 * a31 - a21 * a32 - a11 * a52;
    let big_f = (xe(6, 5) - big_c * a65) / (a11 * a22);
    let phi5 = [a51, a52, -a11 * a21, 0.0];
    let a6: Vec<f64> = (0..4).map(|j| (xe(6, j + 1) - big_f * phi5[j]) / big_c).collect();
    let params = H9Params {
        a11,
        a21,
        a22,
        a31,
        a32,
        a41,
        a42,
        a43,
        a44,
        a51,
        a52,
        a61: a6[0],
        a62: a6[1],
        a63: a6[2],
        a64: a6[3],
    };
    let phi_hat = structured_automorphism(Builtin::H9Hat, &StructuredParams::H9(params))
        .map_err(|_| ModuliError::NotSpd)?
        .matrix;

    // (D, E, F) ↦ (ε1ε2 D, ε1ε2ε3 E, ε1 F) under diag(ε1, ε2, 1, ε3, ε1ε2, ε2)
    let sgn = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    let e1 = sgn(big_f);
    let e2 = e1 * sgn(big_d);
    let e3 = e1 * e2 * sgn(big_e);
    let eps = Mat6::from_diagonal(&nalgebra::Vector6::new(e1, e2, 1.0, e3, e1 * e2, e2));
    let form = CanonicalForm::H9 {
        a: big_a,
        b: big_b,
        c: big_c,
        d: big_d.abs(),
        e: big_e.abs(),
        f: big_f.abs(),
    };
    // g = φᵀ SᵀS φ = (εφ)ᵀ S'ᵀS' (εφ), so the canonicalizing map is (εφ)⁻¹
    let witness_hat = eps * phi_hat;
    let witness = if standard { p * witness_hat * p } else { witness_hat };
    let phi = witness.try_inverse().ok_or(ModuliError::NotSpd)?;
    Ok((form, phi))
}
