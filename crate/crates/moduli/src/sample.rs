use nilmoduli_algebra::Builtin;
use rand::Rng;

use crate::CanonicalForm;

/// A random generic canonical form of the family of `alg`.
///
/// Entries stay in `[0.05, 3]` and off-diagonal blocks keep at least 10%
/// of their determinant, so every draw is comfortably positive definite.
pub fn random_form<R: Rng + ?Sized>(alg: Builtin, rng: &mut R) -> CanonicalForm {
    let mut pos = |lo: f64, hi: f64| rng.random_range(lo..hi);
    match alg {
        Builtin::H6 => {
            let (x, y) = (pos(0.2, 3.0), pos(0.2, 3.0));
            CanonicalForm::H6 {
                a: x.min(y),
                b: x.max(y),
            }
        }
        Builtin::H4 => {
            let (a, c) = (pos(0.3, 3.0), pos(0.3, 3.0));
            let b = pos(0.0, 0.9) * (a * c).sqrt();
            CanonicalForm::H4 {
                r: pos(0.2, 0.95),
                a,
                b,
                c,
            }
        }
        Builtin::H5 => {
            let (x, y) = (pos(0.2, 0.95), pos(0.2, 0.95));
            let (e, g) = (pos(0.3, 3.0), pos(0.3, 3.0));
            let f = pos(0.05, 0.9) * (e * g).sqrt();
            CanonicalForm::H5 {
                r: x.max(y),
                s: x.min(y),
                e,
                f,
                g,
            }
        }
        Builtin::H2 => {
            let (x, y) = (pos(0.05, 0.9), pos(0.05, 0.9));
            let (u, v) = (pos(0.3, 3.0), pos(0.3, 3.0));
            let f = pos(-0.9, 0.9) * (u * v).sqrt();
            CanonicalForm::H2 {
                a: x.min(y),
                b: x.max(y),
                e: u.min(v),
                f,
                g: u.max(v),
            }
        }
        Builtin::H9 | Builtin::H9Hat => CanonicalForm::H9 {
            a: pos(0.3, 3.0),
            b: pos(0.3, 3.0),
            c: pos(0.3, 3.0),
            d: pos(0.05, 2.0),
            e: pos(0.05, 2.0),
            f: pos(0.05, 2.0),
        },
    }
}
