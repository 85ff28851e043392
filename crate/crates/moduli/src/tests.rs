use nalgebra::Vector6;
use nilmoduli_algebra::{hat_permutation, Builtin, Mat6};
use nilmoduli_automorphisms::{psi, Automorphism};
use proptest::prelude::*;

use crate::*;

fn diag(d: [f64; 6]) -> Mat6 {
    Mat6::from_diagonal(&Vector6::from(d))
}

#[test]
fn realize_examples() {
    let g = realize(Builtin::H6, &CanonicalForm::H6 { a: 1.0, b: 1.0 }).unwrap();
    assert_eq!(*g.matrix(), Mat6::identity());
    for alg in Builtin::ALL {
        let g = realize(alg, &CanonicalForm::identity(alg)).unwrap();
        assert_eq!(*g.matrix(), Mat6::identity(), "{alg}");
    }
    let g = realize(
        Builtin::H4,
        &CanonicalForm::H4 {
            r: 0.5,
            a: 2.0,
            b: 0.5,
            c: 3.0,
        },
    )
    .unwrap();
    assert_eq!(g.matrix()[(3, 3)], 0.5);
    assert_eq!(g.matrix()[(5, 4)], 0.5);
}

#[test]
fn h9_forms_move_between_bases() {
    let form = CanonicalForm::H9 {
        a: 1.2,
        b: 0.8,
        c: 1.5,
        d: 0.7,
        e: 0.4,
        f: 0.9,
    };
    let hat = realize(Builtin::H9Hat, &form).unwrap();
    let std = realize(Builtin::H9, &form).unwrap();
    let p = hat_permutation();
    assert_eq!(p * hat.matrix() * p, *std.matrix());
    let s = form.h9_slice();
    assert!((s.transpose() * s - hat.matrix()).amax() < 1e-15);
}

#[test]
fn realize_rejects_bad_input() {
    let wrong = CanonicalForm::H6 { a: 1.0, b: 2.0 };
    assert!(matches!(
        realize(Builtin::H4, &wrong),
        Err(ModuliError::Mismatch { .. })
    ));
    let cases = [
        (Builtin::H6, CanonicalForm::H6 { a: 2.0, b: 1.0 }),
        (Builtin::H6, CanonicalForm::H6 { a: 0.0, b: 1.0 }),
        (
            Builtin::H4,
            CanonicalForm::H4 {
                r: 1.5,
                a: 1.0,
                b: 0.0,
                c: 1.0,
            },
        ),
        (
            Builtin::H4,
            CanonicalForm::H4 {
                r: 0.5,
                a: 1.0,
                b: 2.0,
                c: 1.0,
            },
        ),
        (
            Builtin::H5,
            CanonicalForm::H5 {
                r: 0.5,
                s: 0.8,
                e: 1.0,
                f: 0.0,
                g: 1.0,
            },
        ),
        (
            Builtin::H5,
            CanonicalForm::H5 {
                r: 0.8,
                s: 0.5,
                e: 1.0,
                f: -0.1,
                g: 1.0,
            },
        ),
        (
            Builtin::H2,
            CanonicalForm::H2 {
                a: 0.5,
                b: 0.2,
                e: 1.0,
                f: 0.0,
                g: 1.0,
            },
        ),
        (
            Builtin::H2,
            CanonicalForm::H2 {
                a: 0.0,
                b: 0.2,
                e: 1.0,
                f: -0.1,
                g: 1.0,
            },
        ),
        (
            Builtin::H2,
            CanonicalForm::H2 {
                a: 0.1,
                b: 0.2,
                e: 2.0,
                f: 0.0,
                g: 1.0,
            },
        ),
        (
            Builtin::H2,
            CanonicalForm::H2 {
                a: 0.1,
                b: 1.0,
                e: 1.0,
                f: 0.0,
                g: 1.0,
            },
        ),
        (
            Builtin::H9,
            CanonicalForm::H9 {
                a: 1.0,
                b: 1.0,
                c: 1.0,
                d: -0.1,
                e: 0.0,
                f: 0.0,
            },
        ),
        (
            Builtin::H9,
            CanonicalForm::H9 {
                a: 1.0,
                b: 0.0,
                c: 1.0,
                d: 0.0,
                e: 0.0,
                f: 0.0,
            },
        ),
    ];
    for (alg, form) in cases {
        assert!(
            matches!(realize(alg, &form), Err(ModuliError::InvalidForm(_))),
            "{form:?}"
        );
    }
    let nan = CanonicalForm::H6 { a: f64::NAN, b: 1.0 };
    assert!(realize(Builtin::H6, &nan).is_err());
}

#[test]
fn h2_allows_negative_f_once_a_is_positive() {
    let form = CanonicalForm::H2 {
        a: 0.1,
        b: 0.2,
        e: 1.0,
        f: -0.3,
        g: 1.0,
    };
    assert!(realize(Builtin::H2, &form).is_ok());
}

#[test]
fn metric_requires_spd() {
    let mut m = Mat6::identity();
    m[(0, 1)] = 1e-3;
    assert_eq!(Metric::new(Builtin::H6, m), Err(ModuliError::NotSpd));
    assert!(Metric::symmetrized(Builtin::H6, &m).is_ok());
    assert_eq!(
        Metric::new(Builtin::H6, diag([1., 1., 1., 1., 1., -1.])),
        Err(ModuliError::NotSpd)
    );
    assert_eq!(
        Metric::new(Builtin::H6, diag([1., 1., 1., 1., 1., 0.])),
        Err(ModuliError::NotSpd)
    );
}

#[test]
fn h6_diagonal_example() {
    let g = Metric::new(Builtin::H6, diag([1., 1., 1., 1., 3., 2.])).unwrap();
    let (form, w) = canonicalize(&g).unwrap();
    assert!(form.distance(&CanonicalForm::H6 { a: 2.0, b: 3.0 }).unwrap() < 1e-12);
    assert!(w.residual < 1e-12);
}

#[test]
fn h2_coupled_planes_example() {
    let mut m = Mat6::identity();
    for (i, j, v) in [(0, 2, 0.5), (1, 3, 0.2)] {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    let g = Metric::new(Builtin::H2, m).unwrap();
    let (form, _) = canonicalize(&g).unwrap();
    let CanonicalForm::H2 { a, b, .. } = form else {
        panic!("{form:?}")
    };
    assert!((a - 0.2).abs() < 1e-12 && (b - 0.5).abs() < 1e-12, "{form:?}");
}

#[test]
fn identity_metric_is_the_identity_form() {
    for alg in Builtin::ALL {
        let (form, w) = canonicalize(&Metric::identity(alg)).unwrap();
        assert!(
            form.distance(&CanonicalForm::identity(alg)).unwrap() < 1e-12,
            "{alg}: {form:?}"
        );
        assert!(w.residual < 1e-12);
    }
}

#[test]
fn psi_flips_f() {
    let form = CanonicalForm::H5 {
        r: 0.8,
        s: 0.5,
        e: 1.0,
        f: 0.3,
        g: 2.0,
    };
    let g = realize(Builtin::H5, &form).unwrap();
    let phi = Automorphism {
        matrix: psi(),
        algebra: Builtin::H5,
        component: Some(1),
    };
    let moved = pullback_metric(&g, &phi).unwrap();
    assert_eq!(moved.matrix()[(4, 5)], -0.3);
    let back = pullback_metric(&moved, &phi.inverse()).unwrap();
    assert!((back.matrix() - g.matrix()).amax() <= 1e-12);
    let (canon, _) = canonicalize(&moved).unwrap();
    assert!(canon.distance(&form).unwrap() < 1e-12);
}

#[test]
fn pullback_checks_algebra() {
    let g = Metric::identity(Builtin::H6);
    let phi = Automorphism::identity(Builtin::H4);
    assert!(matches!(pullback_metric(&g, &phi), Err(ModuliError::Mismatch { .. })));
}

#[test]
fn serde_shapes() {
    let form = CanonicalForm::H5 {
        r: 1.0,
        s: 0.5,
        e: 1.0,
        f: 0.0,
        g: 2.0,
    };
    let v = serde_json::to_value(form).unwrap();
    assert_eq!(v["form"], "H5");
    assert_eq!(v["E"], 1.0);
    let back: CanonicalForm = serde_json::from_value(v).unwrap();
    assert_eq!(back, form);

    let g = realize(
        Builtin::H4,
        &CanonicalForm::H4 {
            r: 0.5,
            a: 2.0,
            b: 0.5,
            c: 3.0,
        },
    )
    .unwrap();
    let text = serde_json::to_string(&g).unwrap();
    let back: Metric = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    let bad = r#"{"algebra":"h6","matrix":[[1,0],[0,1]]}"#;
    assert!(serde_json::from_str::<Metric>(bad).is_err());
}

#[test]
fn descriptor_serializes_sorted() {
    let desc = isometry_group(Builtin::H6, &CanonicalForm::H6 { a: 1.0, b: 1.0 }).unwrap();
    let text = serde_json::to_string(&desc).unwrap();
    let keys = [
        "continuous_dim",
        "finite_order",
        "generators",
        "isotropy_algebra",
        "name",
        "notes",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn approx_eq_is_relative() {
    assert!(approx_eq(1e6, 1e6 + 1e-4));
    assert!(!approx_eq(1.0, 1.0 + 1e-8));
    assert!(approx_eq(0.0, 1e-10));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_spd_metrics_canonicalize(entries in prop::collection::vec(-1.0f64..1.0, 36), alg_ix in 0usize..6) {
        let alg = Builtin::ALL[alg_ix];
        let x = Mat6::from_column_slice(&entries);
        let m = x.transpose() * x + Mat6::identity() * 0.5;
        let g = Metric::symmetrized(alg, &m).unwrap();
        let (form, w) = canonicalize(&g).unwrap();
        prop_assert!(form.validate().is_ok(), "{:?}", form);
        prop_assert!(w.residual <= WITNESS_TOL * g.matrix().amax().max(1.0));
        let (again, _) = canonicalize(&realize(alg, &form).unwrap()).unwrap();
        prop_assert!(again.distance(&form).unwrap() <= 1e-8, "{:?} vs {:?}", form, again);
    }
}
