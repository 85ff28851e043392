use nilmoduli_algebra::{hat_permutation, Builtin, Mat6, DIM};
use nilmoduli_automorphisms::{component_count, derivation_algebra};
use nilmoduli_hermitian::{
    h2_hermitian_candidates, h4_hermitian_solutions, h5_hermitian_solutions, h6_hermitian_solutions, h9_j0,
    hermitian_search, Residuals, Solution, SolutionSet, SEARCH_THRESHOLD,
};
use nilmoduli_moduli::{canonicalize, isometry_group, realize, verify_isometry_group, CanonicalForm, Metric};
use serde_json::{json, Value};

use crate::input::{parse_algebra, parse_builtin, parse_form, parse_metric};
use crate::output::sorted;
use crate::{CliError, Report};

/// Bounds every emitted closed-form solution must meet.
pub const NIJENHUIS_BOUND: f64 = 1e-9;
pub const COMPATIBILITY_BOUND: f64 = 1e-11;
pub const INVOLUTION_BOUND: f64 = 1e-12;

/// Default witness tolerance, relative to `max(1, ‖g‖_max)`.
pub const WITNESS_TOL: f64 = 1e-8;

pub fn within_bounds(r: &Residuals) -> bool {
    r.nijenhuis <= NIJENHUIS_BOUND && r.compatibility <= COMPATIBILITY_BOUND && r.involution <= INVOLUTION_BOUND
}

/// Flat row-major entries, the layout used by every matrix in the output.
pub fn row_major(m: &Mat6) -> Vec<f64> {
    (0..DIM).flat_map(|i| (0..DIM).map(move |j| m[(i, j)])).collect()
}

/// Brackets, nilpotency step, derivation dimension and component count.
pub fn describe(text: &str) -> Result<Report, CliError> {
    let alg = parse_algebra(text)?;
    let jacobi = alg.jacobi_residual();
    let brackets: Vec<Value> = alg
        .nonzero_brackets()
        .into_iter()
        .map(|(i, j, v)| json!({ "i": i + 1, "j": j + 1, "value": v.as_slice() }))
        .collect();
    let outputs = json!({
        "abelian": alg.max_constant() == 0.0,
        "algebra": sorted(&alg),
        "brackets": brackets,
        "components": alg.label().map(component_count),
        "derivation_dim": derivation_algebra(&alg).dim(),
        "lower_central_series": alg.lower_central_series(),
        "nilpotency_step": alg.nilpotency_step().ok(),
        "salamon": alg.salamon(),
    });
    let command = json!({ "name": "describe", "algebra": text });
    Ok(Report::new(
        command,
        outputs,
        json!({ "jacobi": jacobi }),
        jacobi <= 1e-12,
    ))
}

/// Canonical form and witness for a metric.
pub fn canonicalize_metric(algebra: &str, input: &Value, tol: f64) -> Result<Report, CliError> {
    let alg = parse_builtin(algebra)?;
    let g = parse_metric(alg, input)?;
    let (form, witness) = canonicalize(&g)?;
    let scale = g.matrix().amax().max(1.0);
    let relative = witness.residual / scale;
    let command = json!({ "name": "canonicalize", "algebra": alg, "metric": row_major(g.matrix()), "tol": tol });
    let outputs = json!({ "form": sorted(&form), "witness": sorted(&witness) });
    let residuals = json!({ "witness": witness.residual, "witness_relative": relative });
    Ok(Report::new(command, outputs, residuals, relative <= tol))
}

/// Isotropy descriptor of a canonical form with its verification.
pub fn isometry(algebra: &str, form: Value) -> Result<Report, CliError> {
    let alg = parse_builtin(algebra)?;
    let form = parse_form(alg, form)?;
    let desc = isometry_group(alg, &form)?;
    let report = verify_isometry_group(alg, &form, &desc)?;
    let command = json!({ "name": "isometry", "algebra": alg, "form": sorted(&form) });
    let outputs = json!({ "descriptor": sorted(&desc), "verification": sorted(&report) });
    Ok(Report::new(
        command,
        outputs,
        json!({ "max_defect": report.max_defect }),
        report.passed(),
    ))
}

fn solutions_ok(set: &SolutionSet) -> bool {
    set.finite().iter().all(|s| within_bounds(&s.residuals))
}

fn all_ok(sols: &[Solution]) -> bool {
    sols.iter().all(|s| within_bounds(&s.residuals))
}

/// Closed-form Hermitian structures of a canonical form, plus the numeric
/// search when `search` carries a budget.
pub fn hermitian(algebra: &str, form: Value, search: Option<usize>, tol: f64) -> Result<Report, CliError> {
    let alg = parse_builtin(algebra)?;
    let form = parse_form(alg, form)?;
    let (closed, passed) = closed_form(alg, &form)?;
    let mut outputs = json!({ "closed_form": closed });
    let mut residuals = json!({});
    if let Some(budget) = search {
        let g: Metric = realize(alg, &form)?;
        let out = hermitian_search(alg, &g, tol, budget)?;
        let found = out.found.is_some();
        let verdict = if found {
            "found"
        } else {
            "no solution found within budget"
        };
        outputs["search"] = json!({
            "best_residual": out.best_residual,
            "best_start": out.best_start,
            "budget": budget,
            "found": found,
            "J": out.found.map(|j| row_major(j.matrix())),
            "residuals": sorted(&out.residuals),
            "starts_run": out.starts_run,
            "threshold": SEARCH_THRESHOLD,
            "verdict": verdict,
        });
        residuals["search"] = json!(out.best_residual);
    }
    let command = json!({ "name": "hermitian", "algebra": alg, "budget": search, "form": sorted(&form), "tol": tol });
    Ok(Report::new(command, outputs, residuals, passed))
}

fn closed_form(alg: Builtin, form: &CanonicalForm) -> Result<(Value, bool), CliError> {
    Ok(match alg {
        Builtin::H5 | Builtin::H4 => {
            let t = if alg == Builtin::H5 {
                h5_hermitian_solutions(form)?
            } else {
                h4_hermitian_solutions(form)?
            };
            let ok = solutions_ok(&t.j1) && solutions_ok(&t.j2);
            (sorted(&t), ok)
        }
        Builtin::H6 => {
            let s = h6_hermitian_solutions(form)?;
            (json!({ "solutions": sorted(&s) }), all_ok(&s))
        }
        Builtin::H2 => {
            let c = h2_hermitian_candidates(form)?;
            let ok = c
                .candidates
                .iter()
                .filter(|c| c.verified)
                .all(|c| c.nijenhuis <= NIJENHUIS_BOUND);
            (sorted(&c), ok)
        }
        Builtin::H9 | Builtin::H9Hat => {
            let j0 = *h9_j0().matrix();
            let j0 = if alg == Builtin::H9 {
                let p = hat_permutation();
                p * j0 * p
            } else {
                j0
            };
            let note = "no closed form on h9; use --search";
            let g = realize(alg, form)?;
            let compatible = (j0.transpose() * g.matrix() * j0 - g.matrix()).amax() <= COMPATIBILITY_BOUND;
            (
                json!({ "J0": row_major(&j0), "J0_compatible": compatible, "note": note }),
                true,
            )
        }
    })
}
