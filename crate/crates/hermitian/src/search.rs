use nalgebra::DVector;
use nilmoduli_algebra::{nijenhuis, AlmostComplexStructure, Builtin, LieAlgebra, Mat6, Vector, DIM};
use nilmoduli_kernel::{cholesky_lower, least_squares_solve, LsqOptions};
use nilmoduli_moduli::Metric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{HermitianError, Residuals};

/// Best residual below which a failed search is not reported as evidence
/// against existence.
///
/// Calibrated on the non-Hermitian `h9` family `diag(1, 1, A², 1, B², 1)`
/// in the hat basis: 40 metrics with `A ∈ [0.5, 2)`, `B/A ∈ {1/2, 2}`,
/// budget 64. The smallest best residual observed was 0.2405. On `B = A`
/// the search converges to about 1e-15.
pub const SEARCH_THRESHOLD: f64 = 0.1;

/// Iteration cap per start.
pub const SEARCH_MAX_ITER: usize = 30;

const CHUNK: usize = 8;
const SEED_BASE: u64 = 0x4e49_4c4d;

/// Outcome of [`hermitian_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    /// The structure found, if its residual is within tolerance.
    #[serde(skip)]
    pub found: Option<AlmostComplexStructure>,
    /// `√(‖N_J‖² + ‖JᵀgJ − g‖² + ‖J² + I‖²)` at the best start.
    pub best_residual: f64,
    pub best_start: usize,
    pub starts_run: usize,
    pub residuals: Residuals,
}

fn skew(x: &DVector<f64>) -> Mat6 {
    let mut k = Mat6::zeros();
    let mut n = 0;
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            k[(i, j)] = x[n];
            k[(j, i)] = -x[n];
            n += 1;
        }
    }
    k
}

fn unskew(k: &Mat6) -> DVector<f64> {
    let mut v = Vec::with_capacity(15);
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            v.push(k[(i, j)]);
        }
    }
    DVector::from_vec(v)
}

fn nijenhuis_entries(alg: &LieAlgebra, j: &Mat6, out: &mut Vec<f64>) {
    for i in 0..DIM {
        for k in (i + 1)..DIM {
            let n = nijenhuis(alg, j, &Vector::ith(i, 1.0), &Vector::ith(k, 1.0));
            out.extend(n.iter());
        }
    }
}

fn total(alg: &LieAlgebra, g: &Mat6, j: &Mat6) -> f64 {
    let mut n = Vec::new();
    nijenhuis_entries(alg, j, &mut n);
    let nn: f64 = n.iter().map(|v| v * v).sum();
    let comp = (j.transpose() * g * j - g).norm_squared();
    let inv = (j * j + Mat6::identity()).norm_squared();
    (nn + comp + inv).sqrt()
}

/// A random orthogonal complex structure `Q J_std Qᵀ`.
fn random_start(seed: u64) -> Mat6 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = Mat6::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let q = m.qr().q();
    let mut std = Mat6::zeros();
    for p in 0..3 {
        std[(2 * p + 1, 2 * p)] = 1.0;
        std[(2 * p, 2 * p + 1)] = -1.0;
    }
    q * std * q.transpose()
}

/// Numeric search for a complex structure compatible with `g`.
///
/// Writing `g = LᵀL`, every compatible `J` is `L⁻¹ K L` with `K` orthogonal
/// and skew, so the unknowns are the 15 entries of a skew `K`. Each start
/// minimizes `‖N_J‖² + ‖K² + I‖²` from a random orthogonal complex
/// structure. Starts run in chunks; the first chunk containing a success
/// ends the search, and the best start is chosen by `(residual, index)`.
/// A `None` is "not found within budget", never a proof of absence.
pub fn hermitian_search(alg: Builtin, g: &Metric, tol: f64, budget: usize) -> Result<SearchOutcome, HermitianError> {
    if g.algebra() != alg {
        return Err(HermitianError::InvalidParams(format!(
            "metric is on {}, not {alg}",
            g.algebra()
        )));
    }
    let lie = LieAlgebra::builtin(alg);
    let gm = *g.matrix();
    let c = cholesky_lower(&gm).map_err(|_| HermitianError::Moduli(nilmoduli_moduli::ModuliError::NotSpd))?;
    let l = c.transpose();
    let l_inv = l
        .try_inverse()
        .ok_or(HermitianError::Moduli(nilmoduli_moduli::ModuliError::NotSpd))?;
    let residual = |x: &DVector<f64>| {
        let k = skew(x);
        let j = l_inv * k * l;
        let mut r = Vec::with_capacity(111);
        nijenhuis_entries(&lie, &j, &mut r);
        let sq = k * k + Mat6::identity();
        for i in 0..DIM {
            for m in i..DIM {
                r.push(sq[(i, m)]);
            }
        }
        DVector::from_vec(r)
    };
    let opts = LsqOptions {
        tol: 1e-14,
        max_iter: SEARCH_MAX_ITER,
    };
    let run = |idx: usize| -> (f64, usize, Mat6) {
        let x0 = unskew(&random_start(SEED_BASE + idx as u64));
        let x = match least_squares_solve(residual, &x0, opts) {
            Ok(out) => out.x,
            Err(_) => x0,
        };
        let j = l_inv * skew(&x) * l;
        (total(&lie, &gm, &j), idx, j)
    };
    let mut best: Option<(f64, usize, Mat6)> = None;
    let mut starts_run = 0;
    for chunk in (0..budget).collect::<Vec<_>>().chunks(CHUNK) {
        let results: Vec<(f64, usize, Mat6)> = chunk.par_iter().map(|&i| run(i)).collect();
        starts_run += chunk.len();
        for r in results {
            if best.as_ref().is_none_or(|b| (r.0, r.1) < (b.0, b.1)) {
                best = Some(r);
            }
        }
        if best.as_ref().is_some_and(|b| b.0 <= tol) {
            break;
        }
    }
    let (best_residual, best_start, j) = best.unwrap_or((f64::INFINITY, 0, Mat6::zeros()));
    let found = if best_residual <= tol {
        AlmostComplexStructure::new(j, Some(alg)).ok()
    } else {
        None
    };
    Ok(SearchOutcome {
        found,
        best_residual,
        best_start,
        starts_run,
        residuals: Residuals::of(&lie, &gm, &j),
    })
}
