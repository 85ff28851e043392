#![allow(dead_code)]

use nilmoduli_algebra::Builtin;
use nilmoduli_moduli::CanonicalForm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_form(alg: Builtin, rng: &mut ChaCha8Rng) -> CanonicalForm {
    nilmoduli_moduli::random_form(alg, rng)
}

/// Forms on the walls of each family, where the stabilizer grows.
pub fn special_forms(alg: Builtin) -> Vec<CanonicalForm> {
    match alg {
        Builtin::H6 => vec![
            CanonicalForm::H6 { a: 1.0, b: 1.0 },
            CanonicalForm::H6 { a: 0.5, b: 2.0 },
        ],
        Builtin::H4 => vec![
            CanonicalForm::H4 {
                r: 1.0,
                a: 1.0,
                b: 0.0,
                c: 2.0,
            },
            CanonicalForm::H4 {
                r: 1.0,
                a: 1.0,
                b: 0.5,
                c: 2.0,
            },
            CanonicalForm::H4 {
                r: 0.5,
                a: 1.0,
                b: 0.0,
                c: 2.0,
            },
            CanonicalForm::H4 {
                r: 0.5,
                a: 1.0,
                b: 0.5,
                c: 2.0,
            },
        ],
        Builtin::H5 => vec![
            CanonicalForm::H5 {
                r: 0.8,
                s: 0.5,
                e: 1.0,
                f: 0.3,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 0.8,
                s: 0.5,
                e: 1.0,
                f: 0.0,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 1.0,
                s: 0.5,
                e: 1.0,
                f: 0.0,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 1.0,
                s: 0.5,
                e: 1.5,
                f: 0.0,
                g: 1.5,
            },
            CanonicalForm::H5 {
                r: 0.7,
                s: 0.7,
                e: 1.0,
                f: 0.3,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 0.7,
                s: 0.7,
                e: 1.0,
                f: 0.0,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 1.0,
                s: 1.0,
                e: 1.0,
                f: 0.0,
                g: 2.0,
            },
            CanonicalForm::H5 {
                r: 1.0,
                s: 1.0,
                e: 1.5,
                f: 0.0,
                g: 1.5,
            },
        ],
        Builtin::H2 => {
            let mut out = Vec::new();
            for (a, b) in [(0.0, 0.0), (0.4, 0.4), (0.0, 0.5), (0.2, 0.5)] {
                for (e, f, g) in [(1.0, 0.0, 1.0), (1.0, 0.0, 2.0), (1.5, 0.3, 1.5), (1.0, 0.3, 2.0)] {
                    out.push(CanonicalForm::H2 { a, b, e, f, g });
                }
            }
            out.push(CanonicalForm::H2 {
                a: 0.2,
                b: 0.5,
                e: 1.0,
                f: -0.3,
                g: 2.0,
            });
            out
        }
        Builtin::H9 | Builtin::H9Hat => {
            let mut out = Vec::new();
            for mask in 0..8u32 {
                let z = |bit: u32, v: f64| if mask & (1 << bit) != 0 { 0.0 } else { v };
                out.push(CanonicalForm::H9 {
                    a: 1.2,
                    b: 0.8,
                    c: 1.5,
                    d: z(0, 0.7),
                    e: z(1, 0.4),
                    f: z(2, 0.9),
                });
            }
            out
        }
    }
}

/// Members of the `h5` family with `r = 1` and `F ≠ 0`; the rotation of
/// `(e1, e2)` carries each to `F = 0`, so they are not fixed points.
pub fn h5_rotated_forms() -> Vec<CanonicalForm> {
    vec![
        CanonicalForm::H5 {
            r: 1.0,
            s: 0.5,
            e: 1.0,
            f: 0.3,
            g: 2.0,
        },
        CanonicalForm::H5 {
            r: 1.0,
            s: 1.0,
            e: 1.0,
            f: 0.3,
            g: 2.0,
        },
    ]
}
