use nilmoduli_algebra::{Builtin, LieAlgebra};
use nilmoduli_hermitian::*;
use nilmoduli_moduli::{random_form, realize, CanonicalForm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SWEEP: usize = 1000;

fn check(s: &Solution, what: &str) {
    let r = &s.residuals;
    assert!(r.nijenhuis <= 1e-9, "{what}: {r:?}");
    assert!(r.compatibility <= 1e-11, "{what}: {r:?}");
    assert!(r.involution <= 1e-12, "{what}: {r:?}");
    assert!(s.triple.sphere_defect() <= 1e-12, "{what}: {:?}", s.triple);
    assert!(s.negation_ok, "{what}");
}

fn quadratic_residual(form: &CanonicalForm, a: f64) -> f64 {
    let CanonicalForm::H5 { r, s, e, f, g } = *form else {
        unreachable!()
    };
    let alpha = (r.sqrt() + s.sqrt()) / (1.0 + (r * s).sqrt());
    let gamma = e / alpha + g * alpha;
    (a * a - a * gamma / (e * g - f * f).sqrt() + 1.0).abs()
}

#[test]
fn h5_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..SWEEP {
        let form = random_form(Builtin::H5, &mut rng);
        let t = h5_hermitian_solutions(&form).unwrap();
        let j1 = t.j1.finite();
        assert!(!j1.is_empty(), "{form:?}");
        for s in j1 {
            check(s, &format!("{form:?}"));
            assert!(s.triple.a > 0.0 && s.triple.a <= 1.0);
            assert!(quadratic_residual(&form, s.triple.a) <= 1e-10, "{form:?}");
            assert!(s.triple.b * s.triple.c >= 0.0);
        }
        for s in t.j2.finite() {
            check(s, &format!("{form:?}"));
            assert!(s.triple.a < 0.0);
            assert!(s.triple.b * s.triple.c <= 0.0);
        }
    }
}

#[test]
fn h4_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..SWEEP {
        let form = random_form(Builtin::H4, &mut rng);
        let t = h4_hermitian_solutions(&form).unwrap();
        assert!(!t.j1.finite().is_empty() && !t.j2.finite().is_empty(), "{form:?}");
        for s in t.j1.finite().iter().chain(t.j2.finite()) {
            check(s, &format!("{form:?}"));
        }
    }
}

#[test]
fn h6_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let lie = LieAlgebra::builtin(Builtin::H6);
    for _ in 0..SWEEP {
        let form = random_form(Builtin::H6, &mut rng);
        let CanonicalForm::H6 { a: e, b: g } = form else {
            unreachable!()
        };
        let alpha = (e / g).sqrt();
        for s in h6_hermitian_solutions(&form).unwrap() {
            check(&s, &format!("{form:?}"));
            assert!(s.residuals.nijenhuis <= 1e-12);
            let m = s.j.matrix();
            let sign = if matches!(s.triple.branch, Branch::J1Plus | Branch::J1Minus) {
                1.0
            } else {
                -1.0
            };
            assert!((m[(5, 4)] - sign * alpha).abs() < 1e-15);
            assert!((m[(4, 5)] + sign / alpha).abs() < 1e-14);
            assert!(nilmoduli_algebra::nijenhuis_residual(&lie, &-m) <= 1e-12);
        }
    }
}

#[test]
fn unit_weight_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let CanonicalForm::H5 { s, e, g, .. } = random_form(Builtin::H5, &mut rng) else {
            unreachable!()
        };
        for form in [
            CanonicalForm::H5 {
                r: 1.0,
                s,
                e,
                f: 0.0,
                g,
            },
            CanonicalForm::H5 { r: s, s, e, f: 0.0, g },
            CanonicalForm::H5 {
                r: 1.0,
                s: 1.0,
                e,
                f: 0.0,
                g,
            },
        ] {
            let t = h5_hermitian_solutions(&form).unwrap();
            for sol in t.j1.finite().iter().chain(t.j2.finite()) {
                check(sol, &format!("{form:?}"));
            }
        }
        let h4 = CanonicalForm::H4 {
            r: 1.0,
            a: e,
            b: 0.0,
            c: g,
        };
        let t = h4_hermitian_solutions(&h4).unwrap();
        for sol in t.j1.finite().iter().chain(t.j2.finite()) {
            check(sol, &format!("{h4:?}"));
        }
    }
}

#[test]
fn closed_forms_are_compatible_with_their_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for alg in [Builtin::H5, Builtin::H4] {
        let form = random_form(alg, &mut rng);
        let g = *realize(alg, &form).unwrap().matrix();
        let t = if alg == Builtin::H5 {
            h5_hermitian_solutions(&form)
        } else {
            h4_hermitian_solutions(&form)
        }
        .unwrap();
        for s in t.j1.finite() {
            assert!(s.j.compatibility_residual(&g) <= 1e-11);
        }
    }
}
