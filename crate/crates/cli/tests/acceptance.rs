//! End-to-end acceptance run: one line per criterion, non-zero exit on any
//! failure. Brackets, Nijenhuis tensors and derivation ranks are recomputed
//! here from the structure constants, independently of the library checks.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, Vector6};
use nilmoduli_algebra::{Builtin, LieAlgebra, Mat6, Vector, DIM};
use nilmoduli_automorphisms::{component_representatives, is_automorphism, random_automorphism};
use nilmoduli_cli::tables::isometry_rows;
use nilmoduli_hermitian::{
    h2_hermitian_candidates, h4_hermitian_solutions, h5_hermitian_solutions, h6_hermitian_solutions, h9_gprime_metric,
    h9_sigma_family, hermitian_search, Sigma, Solution, SEARCH_THRESHOLD,
};
use nilmoduli_moduli::{canonicalize, pullback_metric, random_form, realize, CanonicalForm, Metric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALL: [Builtin; 6] = [
    Builtin::H2,
    Builtin::H4,
    Builtin::H5,
    Builtin::H6,
    Builtin::H9,
    Builtin::H9Hat,
];

const RANK_CUTOFF: f64 = 1e-10;
const PARAM_TOL: f64 = 1e-7;
const WITNESS_TOL: f64 = 1e-8;
const NIJENHUIS_TOL: f64 = 1e-9;
const COMPAT_TOL: f64 = 1e-11;
const INVOLUTION_TOL: f64 = 1e-12;
const QUADRATIC_TOL: f64 = 1e-10;
const SEARCH_TOL: f64 = 1e-8;
const FAMILY_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `[x, y]` from `de^k = Σ c^k_ij e^{ij}`, so `e^k([x, y]) = −Σ c^k_ij x^i y^j`.
fn bracket(lie: &LieAlgebra, x: &Vector, y: &Vector) -> Vector {
    Vector::from_fn(|k, _| {
        let mut s = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                s += lie.constant(k, i, j) * x[i] * y[j];
            }
        }
        -s
    })
}

fn basis(i: usize) -> Vector {
    Vector::ith(i, 1.0)
}

fn nijenhuis_max(lie: &LieAlgebra, j: &Mat6) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..DIM {
        for b in (a + 1)..DIM {
            let (x, y) = (basis(a), basis(b));
            let (jx, jy) = (j * x, j * y);
            let n =
                bracket(lie, &jx, &jy) - j * bracket(lie, &jx, &y) - j * bracket(lie, &x, &jy) - bracket(lie, &x, &y);
            worst = worst.max(n.norm());
        }
    }
    worst
}

fn jacobi_max(lie: &LieAlgebra) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                let (x, y, z) = (basis(a), basis(b), basis(c));
                let s = bracket(lie, &x, &bracket(lie, &y, &z))
                    + bracket(lie, &y, &bracket(lie, &z, &x))
                    + bracket(lie, &z, &bracket(lie, &x, &y));
                worst = worst.max(s.amax());
            }
        }
    }
    worst
}

/// Rank deficiency of `D ↦ (D[x,y] − [Dx,y] − [x,Dy])` over basis pairs.
fn derivation_dim(lie: &LieAlgebra) -> usize {
    let mut rows = Vec::new();
    for a in 0..DIM {
        for b in (a + 1)..DIM {
            for k in 0..DIM {
                let mut row = vec![0.0; DIM * DIM];
                for p in 0..DIM {
                    for q in 0..DIM {
                        let unit = Mat6::from_fn(|r, s| if (r, s) == (p, q) { 1.0 } else { 0.0 });
                        let (x, y) = (basis(a), basis(b));
                        let v =
                            unit * bracket(lie, &x, &y) - bracket(lie, &(unit * x), &y) - bracket(lie, &x, &(unit * y));
                        row[p * DIM + q] = v[k];
                    }
                }
                rows.push(row);
            }
        }
    }
    let m = DMatrix::from_fn(rows.len(), DIM * DIM, |r, c| rows[r][c]);
    let sv = m.singular_values();
    let rank = sv.iter().filter(|&&s| s > RANK_CUTOFF * sv.max().max(1.0)).count();
    DIM * DIM - rank
}

fn preserves_brackets(lie: &LieAlgebra, m: &Mat6) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..DIM {
        for b in (a + 1)..DIM {
            let (x, y) = (basis(a), basis(b));
            let d = bracket(lie, &(m * x), &(m * y)) - m * bracket(lie, &x, &y);
            worst = worst.max(d.amax());
        }
    }
    worst
}

/// `J e_a = e_b`, `J e_b = −e_a` for each listed pair (1-based).
fn pairing(pairs: &[(usize, usize)]) -> Mat6 {
    let mut j = Mat6::zeros();
    for &(a, b) in pairs {
        j[(b - 1, a - 1)] = 1.0;
        j[(a - 1, b - 1)] = -1.0;
    }
    j
}

fn criterion_1() -> Outcome {
    for alg in ALL {
        let lie = LieAlgebra::builtin(alg);
        let (ours, theirs) = (jacobi_max(&lie), lie.jacobi_residual());
        ensure(ours == 0.0 && theirs == 0.0, || {
            format!("{alg}: jacobi {ours:e} / {theirs:e}")
        })?;
    }
    Ok("jacobi residual exactly 0 on h2, h4, h5, h6, h9, h9hat".into())
}

fn criterion_2() -> Outcome {
    let expected = [
        (Builtin::H4, 17),
        (Builtin::H6, 19),
        (Builtin::H9, 15),
        (Builtin::H5, 16),
        (Builtin::H2, 16),
    ];
    let mut found = Vec::new();
    for (alg, dim) in expected {
        let lie = LieAlgebra::builtin(alg);
        let ours = derivation_dim(&lie);
        let theirs = nilmoduli_automorphisms::derivation_algebra(&lie).dim();
        ensure(ours == dim && theirs == dim, || {
            format!("{alg}: expected {dim}, oracle {ours}, library {theirs}")
        })?;
        found.push(format!("{alg} {dim}"));
    }
    Ok(format!("dim Der: {}", found.join(", ")))
}

fn criterion_3() -> Outcome {
    let expected = [
        (Builtin::H5, 2),
        (Builtin::H4, 4),
        (Builtin::H6, 8),
        (Builtin::H2, 8),
        (Builtin::H9, 8),
    ];
    let mut found = Vec::new();
    for (alg, count) in expected {
        let lie = LieAlgebra::builtin(alg);
        let reps = component_representatives(&lie).map_err(|e| format!("{alg}: {e}"))?;
        ensure(reps.len() == count, || {
            format!("{alg}: {} representatives, expected {count}", reps.len())
        })?;
        for r in &reps {
            ensure(is_automorphism(&lie, &r.matrix, 1e-12), || {
                format!("{alg}: representative rejected")
            })?;
            let d = preserves_brackets(&lie, &r.matrix);
            ensure(d <= 1e-12, || format!("{alg}: bracket defect {d:e}"))?;
        }
        found.push(format!("{alg} {count}"));
    }
    Ok(format!("components: {}", found.join(", ")))
}

fn criterion_4() -> Outcome {
    let lie = LieAlgebra::builtin(Builtin::H6);
    let j = pairing(&[(1, 4), (2, 3), (5, 6)]);
    let j0 = pairing(&[(1, 2), (3, 4), (5, 6)]);
    let (n, n0) = (nijenhuis_max(&lie, &j), nijenhuis_max(&lie, &j0));
    let lib = nilmoduli_algebra::nijenhuis_residual(&lie, &j);
    ensure(n <= f64::EPSILON && lib <= f64::EPSILON, || {
        format!("integrable J: N = {n:e} / {lib:e}")
    })?;
    ensure(n0 > 0.1, || format!("pairing J0: N = {n0:e}"))?;
    Ok(format!("h6 integrable J has N = {n}; pairing J0 has N = {n0}"))
}

fn criterion_5() -> Outcome {
    let mut worst = (0.0_f64, 0.0_f64);
    for alg in ALL {
        let mut r = rng(500 + alg as u64);
        for k in 0..100u64 {
            let form = random_form(alg, &mut r);
            let g = realize(alg, &form).map_err(|e| format!("{alg}: {e}"))?;
            let phi = random_automorphism(alg, 7000 + 100 * alg as u64 + k, None);
            let moved = pullback_metric(&g, &phi).map_err(|e| format!("{alg}: {e}"))?;
            let (back, w) = canonicalize(&moved).map_err(|e| format!("{alg} {form:?}: {e}"))?;
            let err = form
                .distance(&back)
                .ok_or_else(|| format!("{alg}: incomparable forms"))?;
            let wm = &w.automorphism.matrix;
            let witness = (wm.transpose() * realize(alg, &back).unwrap().matrix() * wm - moved.matrix()).amax();
            let scale = moved.matrix().amax();
            ensure(err <= PARAM_TOL, || format!("{alg}: {form:?} → {back:?} ({err:e})"))?;
            ensure(witness <= WITNESS_TOL * scale, || {
                format!("{alg}: witness {witness:e} at ‖g‖ {scale:e}")
            })?;
            worst = (worst.0.max(err), worst.1.max(witness / scale));
        }
    }
    Ok(format!(
        "600 pairs; max parameter error {:e}, max relative witness {:e}",
        worst.0, worst.1
    ))
}

fn criterion_6() -> Outcome {
    let rows = isometry_rows().map_err(|e| e.to_string())?;
    let mut samples = 0;
    for row in &rows {
        for s in &row.computed {
            samples += 1;
            let c = &row.case;
            ensure(
                s.verified && s.dim == c.expected_dim && s.order == c.expected_order,
                || {
                    format!(
                        "{} {} ({}): got ({}, {}), expected ({}, {})",
                        c.algebra, c.case, s.name, s.dim, s.order, c.expected_dim, c.expected_order
                    )
                },
            )?;
        }
        ensure(row.passed, || format!("{} {} failed", row.case.algebra, row.case.case))?;
    }
    let differ: Vec<String> = rows
        .iter()
        .filter(|r| !r.agrees_with_printed)
        .map(|r| {
            let c = &r.case;
            format!(
                "{} {}: printed ({}, {}), verified ({}, {})",
                c.algebra, c.case, c.printed_dim, c.printed_order, c.expected_dim, c.expected_order
            )
        })
        .collect();
    for d in &differ {
        println!("    differs from printed: {d}");
    }
    Ok(format!(
        "{} cases, {samples} samples verified; {} differ from printed orders",
        rows.len(),
        differ.len()
    ))
}

fn check_solution(lie: &LieAlgebra, g: &Mat6, s: &Solution, what: &str) -> Result<(), String> {
    let j = s.j.matrix();
    let n = nijenhuis_max(lie, j);
    let c = (j.transpose() * g * j - g).amax();
    let i = (j * j + Mat6::identity()).amax();
    ensure(n <= NIJENHUIS_TOL && c <= COMPAT_TOL && i <= INVOLUTION_TOL, || {
        format!("{what}: N {n:e}, compat {c:e}, inv {i:e}")
    })
}

/// `a² − a γ / √(EG − F²) + 1` with `γ = E/α + Gα`, `α = (√r + √s)/(1 + √(rs))`.
fn quadratic_residual(form: &CanonicalForm, a: f64) -> f64 {
    let CanonicalForm::H5 { r, s, e, f, g } = *form else {
        unreachable!()
    };
    let alpha = (r.sqrt() + s.sqrt()) / (1.0 + (r * s).sqrt());
    let gamma = e / alpha + g * alpha;
    (a * a - a * gamma / (e * g - f * f).sqrt() + 1.0).abs()
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    let mut worst42 = 0.0_f64;
    for alg in [Builtin::H5, Builtin::H4, Builtin::H6] {
        let lie = LieAlgebra::builtin(alg);
        let mut r = rng(700 + alg as u64);
        for _ in 0..1000 {
            let form = random_form(alg, &mut r);
            let g = *realize(alg, &form).map_err(|e| e.to_string())?.matrix();
            let what = format!("{form:?}");
            let sols: Vec<Solution> = match alg {
                Builtin::H6 => h6_hermitian_solutions(&form).map_err(|e| e.to_string())?.to_vec(),
                _ => {
                    let t = if alg == Builtin::H5 {
                        h5_hermitian_solutions(&form)
                    } else {
                        h4_hermitian_solutions(&form)
                    }
                    .map_err(|e| format!("{what}: {e}"))?;
                    if alg == Builtin::H5 {
                        ensure(!t.j1.finite().is_empty(), || format!("{what}: no J1 solution"))?;
                        for s in t.j1.finite() {
                            let d = quadratic_residual(&form, s.triple.a);
                            ensure(d <= QUADRATIC_TOL, || format!("{what}: quadratic residual {d:e}"))?;
                            worst42 = worst42.max(d);
                        }
                    }
                    t.j1.finite().iter().chain(t.j2.finite()).copied().collect()
                }
            };
            ensure(!sols.is_empty(), || format!("{what}: no solutions"))?;
            for s in &sols {
                check_solution(&lie, &g, s, &what)?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} closed-form structures on 3000 forms within bounds; max quadratic residual {worst42:e}"
    ))
}

fn criterion_8() -> Outcome {
    let mut r = rng(800);
    for _ in 0..100 {
        let CanonicalForm::H2 { a, e, f, g, .. } = random_form(Builtin::H2, &mut r) else {
            unreachable!()
        };
        let c = h2_hermitian_candidates(&CanonicalForm::H2 { a, b: a, e, f, g }).map_err(|e| e.to_string())?;
        let triples: Vec<(f64, f64, f64)> = c
            .candidates
            .iter()
            .map(|c| (c.triple.a, c.triple.b, c.triple.c))
            .collect();
        ensure(c.abelian && triples == [(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)], || {
            format!("A = B at a = {a}: {triples:?}")
        })?;
    }
    let mut most = 0;
    for _ in 0..500 {
        let form = random_form(Builtin::H2, &mut r);
        let CanonicalForm::H2 { a, b, .. } = form else {
            unreachable!()
        };
        ensure(a != b, || format!("{form:?} has A = B"))?;
        let c = h2_hermitian_candidates(&form).map_err(|e| e.to_string())?;
        ensure(c.candidates.len() <= 2, || {
            format!("{form:?}: {} candidates", c.candidates.len())
        })?;
        most = most.max(c.candidates.len());
    }
    Ok(format!(
        "A = B gives (±1, 0, 0) with the abelian flag; 500 forms with A ≠ B give at most {most} candidates"
    ))
}

fn h9_metric(a: f64, b: f64) -> Metric {
    Metric::new(
        Builtin::H9Hat,
        Mat6::from_diagonal(&Vector6::new(1.0, 1.0, a * a, 1.0, b * b, 1.0)),
    )
    .unwrap()
}

fn criterion_9() -> Outcome {
    let lie = LieAlgebra::builtin(Builtin::H9Hat);
    let mut r = rng(900);
    let mut worst_found = 0.0_f64;
    for _ in 0..20 {
        let a = r.random_range(0.5..2.0);
        let g = h9_metric(a, a);
        let out = hermitian_search(Builtin::H9Hat, &g, SEARCH_TOL, 64).map_err(|e| e.to_string())?;
        let j = out
            .found
            .ok_or_else(|| format!("A = B = {a}: none found, best {:e}", out.best_residual))?;
        let m = j.matrix();
        let total = (nijenhuis_max(&lie, m).powi(2)
            + (m.transpose() * g.matrix() * m - g.matrix()).norm_squared()
            + (m * m + Mat6::identity()).norm_squared())
        .sqrt();
        ensure(total <= SEARCH_TOL, || {
            format!("A = B = {a}: found J has residual {total:e}")
        })?;
        worst_found = worst_found.max(total);
    }
    let mut lowest = f64::INFINITY;
    for _ in 0..20 {
        let a = r.random_range(0.5..2.0);
        for ratio in [0.5, 2.0] {
            let out = hermitian_search(Builtin::H9Hat, &h9_metric(a, ratio * a), SEARCH_TOL, 64)
                .map_err(|e| e.to_string())?;
            ensure(out.found.is_none() && out.starts_run == 64, || {
                format!("A = {a}, B/A = {ratio}: reported a structure")
            })?;
            ensure(out.best_residual > SEARCH_THRESHOLD, || {
                format!("A = {a}, B/A = {ratio}: best {:e}", out.best_residual)
            })?;
            lowest = lowest.min(out.best_residual);
        }
    }
    Ok(format!(
        "B = A found on 20 metrics (worst {worst_found:e}); none on 40 metrics with B/A in {{0.5, 2}}, lowest best residual {lowest:.4} > {SEARCH_THRESHOLD}"
    ))
}

fn criterion_10() -> Outcome {
    let lie = LieAlgebra::builtin(Builtin::H9Hat);
    let mut r = rng(1000);
    let mut worst = 0.0_f64;
    let mut check = |what: &str, j: &Mat6, g: &Mat6| -> Result<(), String> {
        let n = nijenhuis_max(&lie, j);
        let c = (j.transpose() * g * j - g).amax();
        let i = (j * j + Mat6::identity()).amax();
        let m = n.max(c).max(i);
        ensure(m <= FAMILY_TOL, || format!("{what}: N {n:e}, compat {c:e}, inv {i:e}"))?;
        worst = worst.max(m);
        Ok(())
    };
    for _ in 0..100 {
        let a = r.random_range(0.2..3.0);
        let draws = [
            Sigma::One {
                a,
                e: r.random_range(-2.0..2.0),
            },
            Sigma::Two {
                a,
                f: r.random_range(-2.0..2.0),
            },
            Sigma::Three {
                a11: r.random_range(0.5..1.5),
                a44: r.random_range(0.5..1.5),
                a,
            },
        ];
        for which in draws {
            let m = h9_sigma_family(which).map_err(|e| format!("{which:?}: {e}"))?;
            ensure(m.metric.algebra() == Builtin::H9Hat, || {
                format!("{which:?}: wrong algebra")
            })?;
            check(&format!("{which:?}"), m.j.matrix(), m.metric.matrix())?;
        }
        let (a11, a44): (f64, f64) = (r.random_range(0.6..1.4), r.random_range(0.6..1.4));
        let (a43, a63): (f64, f64) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let a = a44 * a63.abs() / a11.powi(5) * r.random_range(1.1..2.0) + 0.1;
        let gp = h9_gprime_metric(a11, a43, a44, a63, a).map_err(|e| format!("G′ draw: {e}"))?;
        check("G′", gp.member.j.matrix(), gp.member.metric.matrix())?;
    }
    Ok(format!("400 draws over Σ1, Σ2, Σ3, G′; worst residual {worst:e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("structure constants", criterion_1),
        ("derivation dimensions", criterion_2),
        ("component counts", criterion_3),
        ("h6 integrable structure", criterion_4),
        ("orbit invariance", criterion_5),
        ("isometry classification", criterion_6),
        ("hermitian closed forms", criterion_7),
        ("h2 candidates", criterion_8),
        ("h9 search", criterion_9),
        ("h9 families", criterion_10),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {msg}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of 10 passed in {:.1}s",
        10 - failed,
        total.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
