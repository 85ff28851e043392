use std::collections::BTreeMap;

use nilmoduli_algebra::{nijenhuis, parse_salamon, Builtin, LieAlgebra, Mat6, Vector};
use nilmoduli_automorphisms::{
    component_count, component_representatives, derivation_algebra, is_automorphism, random_automorphism,
};
use nilmoduli_hermitian::{
    h2_hermitian_candidates, h4_hermitian_solutions, h5_hermitian_solutions, h6_hermitian_solutions, h9_sigma_family,
    Residuals, Sigma, Solution,
};
use nilmoduli_moduli::{canonicalize, pullback_metric, random_form, realize, CanonicalForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::within_bounds;
use crate::output::sorted;
use crate::Report;

/// Expected `dim Der` for each built-in algebra.
pub const DERIVATION_DIMS: [(Builtin, usize); 6] = [
    (Builtin::H2, 16),
    (Builtin::H4, 17),
    (Builtin::H5, 16),
    (Builtin::H6, 19),
    (Builtin::H9, 15),
    (Builtin::H9Hat, 15),
];

/// Orbit pairs per algebra in the moduli suite.
pub const ORBIT_PAIRS: usize = 100;
/// Random forms per algebra in the Hermitian suite.
pub const HERMITIAN_FORMS: usize = 200;

const PARAM_TOL: f64 = 1e-7;
const WITNESS_TOL: f64 = 1e-8;
const SHRINK_STEPS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Algebra,
    Moduli,
    Hermitian,
}

/// Deliberate corruption used to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// `h5` read with `e^{24}` in place of `e^{42}`.
    SignFlip,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: Value,
    /// The failing form after shrinking toward the identity form, if any.
    pub minimized: Option<CanonicalForm>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteResult {
    pub checks: usize,
    pub failed: usize,
    pub by_check: BTreeMap<String, Tally>,
    pub first_failure: Option<Failure>,
}

impl SuiteResult {
    fn record(&mut self, check: String, ok: bool, failure: impl FnOnce() -> (Value, Option<CanonicalForm>)) {
        self.checks += 1;
        let tally = self.by_check.entry(check.clone()).or_default();
        tally.total += 1;
        if ok {
            tally.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                let (detail, minimized) = failure();
                self.first_failure = Some(Failure {
                    check,
                    detail,
                    minimized,
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn algebra(alg: Builtin, mutation: Option<Mutation>) -> LieAlgebra {
    match (alg, mutation) {
        (Builtin::H5, Some(Mutation::SignFlip)) => parse_salamon("(0,0,0,0,13+24,14+23)")
            .expect("valid notation")
            .with_label(Some(Builtin::H5)),
        _ => LieAlgebra::builtin(alg),
    }
}

/// `form` moved a fraction `t` of the way toward the identity form.
fn toward_identity(form: &CanonicalForm, t: f64) -> CanonicalForm {
    let m = |x: f64, y: f64| x + (y - x) * t;
    match *form {
        CanonicalForm::H5 { r, s, e, f, g } => CanonicalForm::H5 {
            r: m(r, 1.0),
            s: m(s, 1.0),
            e: m(e, 1.0),
            f: m(f, 0.0),
            g: m(g, 1.0),
        },
        CanonicalForm::H6 { a, b } => CanonicalForm::H6 {
            a: m(a, 1.0),
            b: m(b, 1.0),
        },
        CanonicalForm::H4 { r, a, b, c } => CanonicalForm::H4 {
            r: m(r, 1.0),
            a: m(a, 1.0),
            b: m(b, 0.0),
            c: m(c, 1.0),
        },
        CanonicalForm::H2 { a, b, e, f, g } => CanonicalForm::H2 {
            a: m(a, 0.0),
            b: m(b, 0.0),
            e: m(e, 1.0),
            f: m(f, 0.0),
            g: m(g, 1.0),
        },
        CanonicalForm::H9 { a, b, c, d, e, f } => CanonicalForm::H9 {
            a: m(a, 1.0),
            b: m(b, 1.0),
            c: m(c, 1.0),
            d: m(d, 0.0),
            e: m(e, 0.0),
            f: m(f, 0.0),
        },
    }
}

/// Halves the distance to the identity form while the check keeps failing.
pub fn minimize(form: CanonicalForm, fails: impl Fn(&CanonicalForm) -> bool) -> CanonicalForm {
    let mut best = form;
    for _ in 0..SHRINK_STEPS {
        let next = toward_identity(&best, 0.5);
        if next.validate().is_err() || !fails(&next) {
            break;
        }
        best = next;
    }
    best
}

fn random_structure(rng: &mut ChaCha8Rng) -> Mat6 {
    let m = Mat6::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let q = m.qr().q();
    let mut std = Mat6::zeros();
    for p in 0..3 {
        std[(2 * p + 1, 2 * p)] = 1.0;
        std[(2 * p, 2 * p + 1)] = -1.0;
    }
    q * std * q.transpose()
}

fn algebra_suite(rng: &mut ChaCha8Rng, mutation: Option<Mutation>) -> SuiteResult {
    let mut out = SuiteResult::default();
    for (alg, dim) in DERIVATION_DIMS {
        let lie = algebra(alg, mutation);
        let jac = lie.jacobi_residual();
        out.record(format!("jacobi {alg}"), jac == 0.0, || (json!(jac), None));
        let der = derivation_algebra(&lie).dim();
        out.record(format!("derivation dimension {alg}"), der == dim, || {
            (json!({ "expected": dim, "found": der }), None)
        });
        let reps = component_representatives(&lie).unwrap_or_default();
        let reps_ok =
            reps.len() == component_count(alg) && reps.iter().all(|r| is_automorphism(&lie, &r.matrix, 1e-12));
        out.record(format!("component representatives {alg}"), reps_ok, || {
            (json!(reps.len()), None)
        });
        for _ in 0..20 {
            let j = random_structure(rng);
            let x = Vector::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let y = Vector::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let sum = (nijenhuis(&lie, &j, &x, &y) + nijenhuis(&lie, &j, &y, &x)).amax();
            out.record(format!("nijenhuis antisymmetry {alg}"), sum <= 1e-12, || {
                (json!(sum), None)
            });
        }
    }
    out
}

fn orbit_error(alg: Builtin, form: &CanonicalForm, seed: u64) -> Option<(f64, f64)> {
    let phi = random_automorphism(alg, seed, None);
    let g = pullback_metric(&realize(alg, form).ok()?, &phi).ok()?;
    let (canon, w) = canonicalize(&g).ok()?;
    Some((canon.distance(form)?, w.residual / g.matrix().amax().max(1.0)))
}

fn moduli_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut out = SuiteResult::default();
    for alg in Builtin::ALL {
        for _ in 0..ORBIT_PAIRS {
            let form = random_form(alg, rng);
            let seed: u64 = rng.random();
            let fails =
                |f: &CanonicalForm| orbit_error(alg, f, seed).is_none_or(|(p, w)| p > PARAM_TOL || w > WITNESS_TOL);
            out.record(format!("orbit invariance {alg}"), !fails(&form), || (json!({ "automorphism_seed": seed, "errors": orbit_error(alg, &form, seed), "form": sorted(&form) }), Some(minimize(form, fails))));
        }
    }
    out
}

fn solutions_fail(lie: &LieAlgebra, alg: Builtin, form: &CanonicalForm) -> bool {
    let Ok(g) = realize(alg, form) else {
        return true;
    };
    let check = |s: &Solution| within_bounds(&Residuals::of(lie, g.matrix(), s.j.matrix()));
    let sols: Vec<Solution> = match alg {
        Builtin::H5 | Builtin::H4 => {
            let t = if alg == Builtin::H5 {
                h5_hermitian_solutions(form)
            } else {
                h4_hermitian_solutions(form)
            };
            match t {
                Ok(t) => t.j1.finite().iter().chain(t.j2.finite()).copied().collect(),
                Err(_) => return true,
            }
        }
        _ => match h6_hermitian_solutions(form) {
            Ok(s) => s.to_vec(),
            Err(_) => return true,
        },
    };
    (sols.is_empty() && alg == Builtin::H5) || !sols.iter().all(check)
}

fn hermitian_suite(rng: &mut ChaCha8Rng, mutation: Option<Mutation>) -> SuiteResult {
    let mut out = SuiteResult::default();
    for alg in [Builtin::H5, Builtin::H4, Builtin::H6] {
        let lie = algebra(alg, mutation);
        for _ in 0..HERMITIAN_FORMS {
            let form = random_form(alg, rng);
            let fails = |f: &CanonicalForm| solutions_fail(&lie, alg, f);
            out.record(format!("closed-form solutions {alg}"), !fails(&form), || {
                (sorted(&form), Some(minimize(form, fails)))
            });
        }
    }
    let h2_fails = |f: &CanonicalForm| {
        h2_hermitian_candidates(f).map_or(true, |c| {
            c.candidates.len() > 2 || c.candidates.iter().any(|c| !c.verified)
        })
    };
    for _ in 0..HERMITIAN_FORMS {
        let form = random_form(Builtin::H2, rng);
        out.record("h2 candidates".into(), !h2_fails(&form), || {
            (sorted(&form), Some(minimize(form, h2_fails)))
        });
    }
    for _ in 0..50 {
        let a = rng.random_range(0.2..3.0);
        for which in [
            Sigma::One {
                a,
                e: rng.random_range(-2.0..2.0),
            },
            Sigma::Two {
                a,
                f: rng.random_range(-2.0..2.0),
            },
            Sigma::Three {
                a11: rng.random_range(0.5..1.5),
                a44: rng.random_range(0.5..1.5),
                a,
            },
        ] {
            let res = h9_sigma_family(which).map(|m| m.residuals.max());
            out.record("h9 family".into(), res.as_ref().is_ok_and(|r| *r <= 1e-10), || {
                (json!({ "family": sorted(&which), "residual": res.ok() }), None)
            });
        }
    }
    out
}

/// Runs the selected property suites from one seed.
pub fn verify(suite: Suite, seed: u64, mutation: Option<Mutation>) -> Report {
    let mut results = serde_json::Map::new();
    let mut passed = true;
    let mut run = |name: &str, salt: u64, f: &dyn Fn(&mut ChaCha8Rng) -> SuiteResult| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
        let r = f(&mut rng);
        passed &= r.passed();
        results.insert(name.into(), sorted(&r));
    };
    if matches!(suite, Suite::All | Suite::Algebra) {
        run("algebra", 0xA1, &|rng| algebra_suite(rng, mutation));
    }
    if matches!(suite, Suite::All | Suite::Moduli) {
        run("moduli", 0xB2, &moduli_suite);
    }
    if matches!(suite, Suite::All | Suite::Hermitian) {
        run("hermitian", 0xC3, &|rng| hermitian_suite(rng, mutation));
    }
    let name = match suite {
        Suite::All => "all",
        Suite::Algebra => "algebra",
        Suite::Moduli => "moduli",
        Suite::Hermitian => "hermitian",
    };
    let command = json!({ "name": "verify", "suite": name, "seed": seed, "mutation": mutation.map(|_| "sign-flip") });
    Report::new(command, Value::Object(results), json!({}), passed)
}
