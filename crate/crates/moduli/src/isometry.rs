use nalgebra::{DMatrix, DVector};
use nilmoduli_algebra::{hat_permutation, Builtin, LieAlgebra, Mat6, DIM};
use nilmoduli_automorphisms::{
    bracket_defect, component_of, derivation_algebra, derivation_defect, h2_swap, is_automorphism, psi, Automorphism,
};
use nilmoduli_kernel::{expm, least_squares_solve, null_space, LsqOptions};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::{approx_eq, canonicalize, realize, CanonicalForm, ModuliError};

/// Isotropy group `K = Aut ∩ O(g)` of a canonical metric.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDescriptor {
    pub name: String,
    /// `dim K`.
    pub continuous_dim: usize,
    /// `|K / K₀|`, the number of connected components.
    pub finite_order: usize,
    /// Elements meeting every component, closing under products to a group
    /// of order `finite_order`.
    pub generators: Vec<Automorphism>,
    /// Basis of the Lie algebra of `K`.
    pub isotropy_algebra: Vec<Mat6>,
    pub notes: String,
}

fn row_major(m: &Mat6) -> Vec<f64> {
    (0..DIM).flat_map(|i| (0..DIM).map(move |j| m[(i, j)])).collect()
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let algebra: Vec<Vec<f64>> = self.isotropy_algebra.iter().map(row_major).collect();
        let mut st = s.serialize_struct("GroupDescriptor", 6)?;
        st.serialize_field("continuous_dim", &self.continuous_dim)?;
        st.serialize_field("finite_order", &self.finite_order)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("isotropy_algebra", &algebra)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

fn diag(d: [f64; 6]) -> Mat6 {
    Mat6::from_diagonal(&nalgebra::Vector6::from(d))
}

/// Infinitesimal rotation `e_i ↦ e_j`, `e_j ↦ −e_i` (0-based).
fn rot(i: usize, j: usize) -> Mat6 {
    let mut m = Mat6::zeros();
    m[(j, i)] = 1.0;
    m[(i, j)] = -1.0;
    m
}

/// Real form of a complex 2×2 matrix acting on `(e1 + i e2, e3 + i e4)`,
/// given row-major as `(re, im)` pairs.
fn complex4(z: [(f64, f64); 4]) -> Mat6 {
    let mut m = Mat6::zeros();
    for (k, (re, im)) in z.into_iter().enumerate() {
        let (r, c) = (2 * (k / 2), 2 * (k % 2));
        m[(r, c)] = re;
        m[(r + 1, c)] = im;
        m[(r, c + 1)] = -im;
        m[(r + 1, c + 1)] = re;
    }
    m
}

struct GroupShape {
    name: &'static str,
    dim: usize,
    order: usize,
    gens: Vec<Mat6>,
    algebra: Vec<Mat6>,
    notes: &'static str,
}

fn h6_group(a: f64, b: f64) -> GroupShape {
    let r_flip = diag([-1., 1., 1., 1., -1., -1.]);
    let s_flip = diag([1., 1., 1., -1., 1., 1.]);
    let refl = diag([1., 1., -1., 1., 1., -1.]);
    if approx_eq(a, b) {
        GroupShape {
            name: "O(2) × Z2 × Z2",
            dim: 1,
            order: 8,
            gens: vec![r_flip, s_flip, refl],
            algebra: vec![rot(1, 2) + rot(4, 5)],
            notes: "O(2) acts on span(e2, e3) and span(e5, e6) together",
        }
    } else {
        GroupShape {
            name: "Z2^4",
            dim: 0,
            order: 16,
            gens: vec![r_flip, s_flip, refl, diag([1., -1., 1., 1., -1., 1.])],
            algebra: vec![],
            notes: "signs of r and s, and the diagonal sign matrices in O(2)",
        }
    }
}

fn h4_group(r: f64, b: f64) -> GroupShape {
    let refl = diag([1., -1., 1., -1., -1., -1.]);
    let minus = diag([-1., -1., -1., -1., 1., 1.]);
    let x_flip = diag([1., 1., -1., -1., 1., -1.]);
    let circle = rot(0, 1) - rot(2, 3);
    match (approx_eq(r, 1.0), approx_eq(b, 0.0)) {
        (true, true) => GroupShape {
            name: "O(2) ⋊ Z2",
            dim: 1,
            order: 4,
            gens: vec![refl, x_flip],
            algebra: vec![circle],
            notes: "A ∈ O(2) acting by (A, σ(A)); Z2 is x = −1",
        },
        (true, false) => GroupShape {
            name: "O(2)",
            dim: 1,
            order: 2,
            gens: vec![refl],
            algebra: vec![circle],
            notes: "A ∈ O(2) acting by (A, σ(A))",
        },
        (false, true) => GroupShape {
            name: "Z2^3",
            dim: 0,
            order: 8,
            gens: vec![refl, minus, x_flip],
            algebra: vec![],
            notes: "A ∈ {diag(±1, ±1)} and x = ±1",
        },
        (false, false) => GroupShape {
            name: "Z2 × Z2",
            dim: 0,
            order: 4,
            gens: vec![refl, minus],
            algebra: vec![],
            notes: "A ∈ {diag(±1, ±1)}",
        },
    }
}

fn h5_group(r: f64, s: f64, e: f64, f: f64, g: f64) -> GroupShape {
    let m1 = diag([-1., -1., 1., 1., -1., -1.]);
    let m2 = diag([1., 1., -1., -1., -1., -1.]);
    let psi = psi();
    let f0 = approx_eq(f, 0.0);
    let round = f0 && approx_eq(e, g);
    let r1 = approx_eq(r, 1.0);
    let rs = approx_eq(r, s);
    let su2 = vec![
        complex4([(0., 1.), (0., 0.), (0., 0.), (0., -1.)]),
        complex4([(0., 0.), (1., 0.), (-1., 0.), (0., 0.)]),
        complex4([(0., 0.), (0., 1.), (0., 1.), (0., 0.)]),
    ];
    match (r1, rs) {
        (false, false) if !f0 => GroupShape {
            name: "Z2 × Z2",
            dim: 0,
            order: 4,
            gens: vec![m1, m2],
            algebra: vec![],
            notes: "z1, z4 = ±1",
        },
        (false, false) => GroupShape {
            name: "Z2^3",
            dim: 0,
            order: 8,
            gens: vec![m1, m2, psi],
            algebra: vec![],
            notes: "z1, z4 = ±1 and ψ",
        },
        (true, false) if !round => GroupShape {
            name: "Z2^3",
            dim: 0,
            order: 8,
            gens: vec![m1, m2, psi],
            algebra: vec![],
            notes: "z1, z4 = ±1 and ψ",
        },
        (true, false) => GroupShape {
            name: "O(2) × Z2",
            dim: 1,
            order: 4,
            gens: vec![m2, psi],
            algebra: vec![rot(0, 1) + rot(4, 5)],
            notes: "z1 ∈ U(1) with ψ forms O(2); z4 = ±1 is the extra Z2",
        },
        (false, true) if !f0 => GroupShape {
            name: "O(2)",
            dim: 1,
            order: 2,
            gens: vec![m2],
            algebra: vec![rot(0, 2) + rot(1, 3)],
            notes: "real O(2) ⊂ GL2(C)",
        },
        (false, true) => GroupShape {
            name: "O(2) × Z2",
            dim: 1,
            order: 4,
            gens: vec![m2, psi],
            algebra: vec![rot(0, 2) + rot(1, 3)],
            notes: "real O(2) ⊂ GL2(C) and ψ",
        },
        (true, true) if !f0 => GroupShape {
            name: "SU(2) ⋊ Z2",
            dim: 3,
            order: 2,
            gens: vec![m2],
            algebra: su2,
            notes: "A ∈ U(2) with det A = ±1",
        },
        (true, true) if !round => GroupShape {
            name: "(SU(2) ⋊ Z2) ⋊ Z2",
            dim: 3,
            order: 4,
            gens: vec![m2, psi],
            algebra: su2,
            notes: "A ∈ U(2) with det A = ±1, and ψ",
        },
        (true, true) => {
            let mut u2 = su2;
            u2.push(rot(0, 1) + rot(2, 3) + rot(4, 5) * 2.0);
            GroupShape {
                name: "U(2) ⋊ Z2",
                dim: 4,
                order: 2,
                gens: vec![psi],
                algebra: u2,
                notes: "U(2) ⊂ GL2(C) and ψ",
            }
        }
    }
}

fn h2_group(a: f64, b: f64, e: f64, f: f64, g: f64) -> GroupShape {
    let p1 = diag([-1., 1., 1., 1., -1., 1.]);
    let p2 = diag([1., 1., -1., 1., 1., -1.]);
    let p12 = p1 * p2;
    let same = diag([1., -1., 1., -1., -1., -1.]);
    let swap = h2_swap();
    let eg = approx_eq(e, g);
    let f0 = approx_eq(f, 0.0);
    let a0 = approx_eq(a, 0.0);
    let ab = approx_eq(a, b);
    let both = vec![rot(0, 1), rot(2, 3)];
    let diagonal = vec![rot(0, 1) + rot(2, 3)];
    let with = |mut v: Vec<Mat6>, extra: bool| {
        if extra {
            v.push(swap);
        }
        v
    };
    if a0 && ab {
        let (name, order, gens, notes) = match (f0, eg) {
            (true, true) => (
                "(O(2) × O(2)) ⋊ Z2",
                8,
                with(vec![p1, p2], true),
                "independent O(2) on both planes, exchanged",
            ),
            (true, false) => ("O(2) × O(2)", 4, vec![p1, p2], "independent O(2) on both planes"),
            (false, true) => (
                "S(O(2) × O(2)) ⋊ Z2",
                4,
                with(vec![p12], true),
                "det A · det B = 1, exchanged",
            ),
            (false, false) => ("S(O(2) × O(2))", 2, vec![p12], "det A · det B = 1"),
        };
        return GroupShape {
            name,
            dim: 2,
            order,
            gens,
            algebra: both,
            notes,
        };
    }
    if ab {
        let (name, order, gens) = if eg {
            ("diag(O(2) × O(2)) ⋊ Z2", 4, with(vec![p12], true))
        } else {
            ("diag(O(2) × O(2))", 2, vec![p12])
        };
        return GroupShape {
            name,
            dim: 1,
            order,
            gens,
            algebra: diagonal,
            notes: "A = B ∈ O(2)",
        };
    }
    if a0 {
        let (name, order, gens, notes) = match (f0, eg) {
            (true, true) => (
                "Z2^4",
                16,
                with(vec![p1, p2, same], true),
                "A = diag(±1, ε), B = diag(±1, ε), exchanged",
            ),
            (true, false) => ("Z2^3", 8, vec![p1, p2, same], "A = diag(±1, ε), B = diag(±1, ε)"),
            (false, true) => (
                "Z2^3",
                8,
                with(vec![p12, same], true),
                "A = B = diag(±1, ±1), exchanged",
            ),
            (false, false) => ("Z2 × Z2", 4, vec![p12, same], "A = B = diag(±1, ±1)"),
        };
        return GroupShape {
            name,
            dim: 0,
            order,
            gens,
            algebra: vec![],
            notes,
        };
    }
    if eg {
        GroupShape {
            name: "Z2^3",
            dim: 0,
            order: 8,
            gens: vec![p12, same, swap],
            algebra: vec![],
            notes: "A = B = diag(±1, ±1), exchanged; the exchange commutes with both",
        }
    } else {
        GroupShape {
            name: "Z2 × Z2",
            dim: 0,
            order: 4,
            gens: vec![p12, same],
            algebra: vec![],
            notes: "A = B = diag(±1, ±1)",
        }
    }
}

fn h9_group(d: f64, e: f64, f: f64) -> GroupShape {
    let mut gens = Vec::new();
    let mut k = 0;
    // ε1 flips F, ε1ε2 flips D, ε1ε2ε3 flips E; each null parameter frees one
    // independent sign
    let fixes = [
        (approx_eq(f, 0.0), [-1., -1., 1., 1., 1., -1.]),
        (approx_eq(d, 0.0), [1., -1., 1., -1., -1., -1.]),
        (approx_eq(e, 0.0), [1., 1., 1., -1., 1., 1.]),
    ];
    for (null, eps) in fixes {
        if null {
            gens.push(diag(eps));
            k += 1;
        }
    }
    let name = match k {
        0 => "trivial",
        1 => "Z2",
        2 => "Z2 × Z2",
        _ => "Z2^3",
    };
    GroupShape {
        name,
        dim: 0,
        order: 1 << k,
        gens,
        algebra: vec![],
        notes: "sign-diagonal diag(ε1, ε2, 1, ε3, ε1ε2, ε2)",
    }
}

/// Isotropy group of the canonical metric `form` on `alg`.
///
/// On `h5` with `r = 1` the family still carries metrics with `F ≠ 0`;
/// these are rotated to `F = 0` and the group is conjugated back.
pub fn isometry_group(alg: Builtin, form: &CanonicalForm) -> Result<GroupDescriptor, ModuliError> {
    let metric = realize(alg, form)?;
    if let CanonicalForm::H5 { r, f, .. } = *form {
        if r == 1.0 && f != 0.0 {
            let (canon, witness) = canonicalize(&metric)?;
            let w = witness.automorphism.matrix;
            let w_inv = witness.automorphism.inverse().matrix;
            let mut desc = isometry_group(alg, &canon)?;
            for gen in &mut desc.generators {
                gen.matrix = w_inv * gen.matrix * w;
                gen.component = component_of(alg, &gen.matrix);
            }
            for k in &mut desc.isotropy_algebra {
                *k = w_inv * *k * w;
            }
            desc.notes = format!("{}; conjugated from F = 0 by the rotation of (e1, e2)", desc.notes);
            return Ok(desc);
        }
    }
    let shape = match *form {
        CanonicalForm::H6 { a, b } => h6_group(a, b),
        CanonicalForm::H4 { r, b, .. } => h4_group(r, b),
        CanonicalForm::H5 { r, s, e, f, g } => h5_group(r, s, e, f, g),
        CanonicalForm::H2 { a, b, e, f, g } => h2_group(a, b, e, f, g),
        CanonicalForm::H9 { d, e, f, .. } => h9_group(d, e, f),
    };
    let to_basis = |m: Mat6| {
        if alg == Builtin::H9 {
            let p = hat_permutation();
            p * m * p
        } else {
            m
        }
    };
    let generators = shape
        .gens
        .into_iter()
        .map(to_basis)
        .map(|m| Automorphism {
            matrix: m,
            algebra: alg,
            component: component_of(alg, &m),
        })
        .collect();
    Ok(GroupDescriptor {
        name: shape.name.to_string(),
        continuous_dim: shape.dim,
        finite_order: shape.order,
        generators,
        isotropy_algebra: shape.algebra.into_iter().map(to_basis).collect(),
        notes: shape.notes.to_string(),
    })
}

/// Outcome of [`verify_isometry_group`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    /// Worst bracket or metric defect over generators and algebra elements.
    pub max_defect: f64,
    pub generators_ok: bool,
    /// Order of the group generated by the finite generators.
    pub generated_order: usize,
    pub closure_ok: bool,
    /// `dim {D ∈ Der : Dᵀg + gD = 0}`.
    pub computed_dim: usize,
    pub continuous_ok: bool,
    /// Signed permutation isometries found outside `⟨generators⟩ · K₀`.
    pub unaccounted: usize,
    /// Signed permutation isometries examined.
    pub signed_isometries: usize,
    pub maximal_ok: bool,
}

impl IsometryReport {
    pub fn passed(&self) -> bool {
        self.generators_ok && self.closure_ok && self.continuous_ok && self.maximal_ok
    }
}

const DEFECT_TOL: f64 = 1e-10;
const GROUP_CAP: usize = 512;

fn metric_defect(g: &Mat6, m: &Mat6) -> f64 {
    (m.transpose() * g * m - g).amax()
}

fn close_group(gens: &[Mat6]) -> Vec<Mat6> {
    let mut elems = vec![Mat6::identity()];
    let mut frontier = vec![Mat6::identity()];
    while let Some(x) = frontier.pop() {
        for gen in gens {
            let y = x * gen;
            if !elems.iter().any(|e| (e - y).amax() <= 1e-9) {
                elems.push(y);
                frontier.push(y);
                if elems.len() > GROUP_CAP {
                    return elems;
                }
            }
        }
    }
    elems
}

/// Whether `y = exp(Σ cᵢ Kᵢ)` for some coefficients, by multi-start least squares.
fn in_identity_component(y: &Mat6, algebra: &[Mat6]) -> bool {
    if algebra.is_empty() {
        return (y - Mat6::identity()).amax() <= 1e-9;
    }
    let n = algebra.len();
    let target = DVector::from_column_slice(y.as_slice());
    let residual = |c: &DVector<f64>| {
        let x = algebra
            .iter()
            .zip(c.iter())
            .fold(Mat6::zeros(), |acc, (k, ci)| acc + k * *ci);
        DVector::from_column_slice(expm(&x).as_slice()) - &target
    };
    let opts = LsqOptions {
        tol: 1e-13,
        max_iter: 200,
    };
    let golden = 0.618_033_988_749_895_f64;
    for start in 0..24 {
        let x0 = DVector::from_fn(n, |i, _| {
            let u = ((start * n + i) as f64 * golden).fract();
            if start == 0 {
                0.0
            } else {
                (2.0 * u - 1.0) * std::f64::consts::PI
            }
        });
        if let Ok(out) = least_squares_solve(residual, &x0, opts) {
            if out.residual_norm <= 1e-8 {
                return true;
            }
        }
    }
    false
}

/// Every signed permutation matrix that is an isometric automorphism.
fn signed_permutation_isometries(alg: &LieAlgebra, g: &Mat6) -> Vec<Mat6> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..DIM).collect();
    let scale = g.amax().max(1.0);
    loop {
        for signs in 0u32..(1 << DIM) {
            let m = Mat6::from_fn(|i, j| {
                if perm[j] == i {
                    if signs & (1 << j) != 0 {
                        -1.0
                    } else {
                        1.0
                    }
                } else {
                    0.0
                }
            });
            if metric_defect(g, &m) <= 1e-9 * scale && is_automorphism(alg, &m, 1e-12) {
                out.push(m);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Checks a descriptor against the metric it claims to describe.
///
/// Generators and algebra elements must preserve brackets and the metric;
/// the generators must close to a group of the stated order; the stated
/// dimension must match the kernel of `D ↦ Dᵀg + gD` on derivations; and
/// every signed permutation isometry must lie in `⟨generators⟩ · K₀`.
pub fn verify_isometry_group(
    alg: Builtin,
    form: &CanonicalForm,
    desc: &GroupDescriptor,
) -> Result<IsometryReport, ModuliError> {
    let g = *realize(alg, form)?.matrix();
    let lie = LieAlgebra::builtin(alg);
    let scale = g.amax().max(1.0);

    let mut max_defect = 0.0_f64;
    for gen in &desc.generators {
        let m = &gen.matrix;
        max_defect = max_defect
            .max(bracket_defect(&lie, m) / m.amax().powi(2).max(1.0))
            .max(metric_defect(&g, m) / scale);
    }
    for k in &desc.isotropy_algebra {
        max_defect = max_defect
            .max(derivation_defect(&lie, k))
            .max((k.transpose() * g + g * k).amax() / scale);
    }
    let generators_ok = max_defect <= DEFECT_TOL;

    let gens: Vec<Mat6> = desc.generators.iter().map(|a| a.matrix).collect();
    let group = close_group(&gens);
    let closure_ok = group.len() == desc.finite_order;

    let der = derivation_algebra(&lie);
    let mut sys = DMatrix::zeros(DIM * DIM, der.dim());
    for (c, d) in der.basis.iter().enumerate() {
        let v = d.transpose() * g + g * d;
        sys.set_column(c, &DVector::from_column_slice(v.as_slice()));
    }
    let computed_dim = null_space(&sys, 1e-9).dim();
    let algebra_rank = if desc.isotropy_algebra.is_empty() {
        0
    } else {
        let mut a = DMatrix::zeros(DIM * DIM, desc.isotropy_algebra.len());
        for (c, k) in desc.isotropy_algebra.iter().enumerate() {
            a.set_column(c, &DVector::from_column_slice(k.as_slice()));
        }
        desc.isotropy_algebra.len() - null_space(&a, 1e-9).dim()
    };
    let continuous_ok = computed_dim == desc.continuous_dim && algebra_rank == desc.continuous_dim;

    let signed = signed_permutation_isometries(&lie, &g);
    let unaccounted = signed
        .iter()
        .filter(|x| {
            !group.iter().any(|y| {
                let y_inv = y.try_inverse().expect("group elements are invertible");
                in_identity_component(&(y_inv * *x), &desc.isotropy_algebra)
            })
        })
        .count();

    Ok(IsometryReport {
        max_defect,
        generators_ok,
        generated_order: group.len(),
        closure_ok,
        computed_dim,
        continuous_ok,
        unaccounted,
        signed_isometries: signed.len(),
        maximal_ok: unaccounted == 0,
    })
}
