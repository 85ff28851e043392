use nalgebra::{Complex, Matrix2, Vector2};
use nilmoduli_algebra::{Builtin, LieAlgebra, Mat6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{self, Block24, H2Params, H4Params, H5Params, H6Params, H9Params, StructuredParams};
use crate::{component_of, component_representatives, Automorphism};

const MAX_COND: f64 = 1e3;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-1.0..1.0)
}

fn scale(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.5..2.0)
}

/// 2×2 matrix with determinant at least 0.2.
fn positive_gl2(rng: &mut ChaCha8Rng) -> Matrix2<f64> {
    loop {
        let m = Matrix2::new(1.0 + unit(rng), unit(rng), unit(rng), 1.0 + unit(rng));
        if m.determinant() >= 0.2 {
            return m;
        }
    }
}

fn block(rng: &mut ChaCha8Rng) -> Block24 {
    Block24::from_fn(|_, _| unit(rng))
}

fn identity_component(alg: Builtin, rng: &mut ChaCha8Rng) -> StructuredParams {
    match alg {
        Builtin::H6 => StructuredParams::H6(H6Params {
            r: scale(rng),
            s: scale(rng),
            x: Vector2::new(unit(rng), unit(rng)),
            y: Vector2::new(unit(rng), unit(rng)),
            z: unit(rng),
            a_tilde: positive_gl2(rng),
            m: block(rng),
        }),
        Builtin::H4 => StructuredParams::H4(H4Params {
            a: positive_gl2(rng),
            b: Matrix2::from_fn(|_, _| unit(rng)),
            x: scale(rng),
            m: block(rng),
        }),
        Builtin::H5 => loop {
            let mut c = || Complex::new(unit(rng), unit(rng));
            let z = [c() + 1.0, c(), c(), c() + 1.0];
            if (z[0] * z[3] - z[1] * z[2]).norm() >= 0.2 {
                break StructuredParams::H5(H5Params {
                    z,
                    m: block(rng),
                    psi: false,
                });
            }
        },
        Builtin::H2 => StructuredParams::H2(H2Params {
            a: positive_gl2(rng),
            b: positive_gl2(rng),
            m1: Matrix2::from_fn(|_, _| unit(rng)),
            m2: Matrix2::from_fn(|_, _| unit(rng)),
            swap: false,
        }),
        Builtin::H9 | Builtin::H9Hat => StructuredParams::H9(H9Params {
            a11: scale(rng),
            a21: unit(rng),
            a22: scale(rng),
            a31: unit(rng),
            a32: unit(rng),
            a41: unit(rng),
            a42: unit(rng),
            a43: unit(rng),
            a44: scale(rng),
            a51: unit(rng),
            a52: unit(rng),
            a61: unit(rng),
            a62: unit(rng),
            a63: unit(rng),
            a64: unit(rng),
        }),
    }
}

fn cond(m: &Mat6) -> f64 {
    let sv = m.singular_values();
    sv.max() / sv.min()
}

/// A seeded automorphism with condition number at most 1e3.
///
/// The sample is drawn from the identity component and then multiplied by
/// the representative of `component`; `None` draws the component uniformly.
pub fn random_automorphism(alg: Builtin, seed: u64, component: Option<usize>) -> Automorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = forms::component_count(alg);
    let target = component.unwrap_or_else(|| rng.random_range(0..count)) % count;
    let reps = component_representatives(&LieAlgebra::builtin(alg)).expect("built-in");
    let rep = reps[target].matrix;
    loop {
        let p = identity_component(alg, &mut rng);
        let base = forms::build(alg, &p).expect("sampled parameters are nondegenerate");
        let matrix = rep * base;
        if cond(&matrix) <= MAX_COND {
            return Automorphism {
                matrix,
                algebra: alg,
                component: component_of(alg, &matrix),
            };
        }
    }
}
