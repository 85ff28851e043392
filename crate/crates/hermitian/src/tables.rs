use nilmoduli_algebra::{AlmostComplexStructure, Builtin, Mat6};
use nilmoduli_moduli::{approx_eq, realize, CanonicalForm};
use serde::Serialize;

use crate::{Branch, HermitianError, Solution, SolutionSet, SolutionTriple};

/// Closed-form constants attached to a canonical metric.
///
/// `det` is `Δ = EG − F²`, `gamma = E/α + Gα` and `delta = E/β + Gβ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermitianParams {
    pub det: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub gamma: f64,
    pub delta: Option<f64>,
}

impl HermitianParams {
    fn build(e: f64, f: f64, g: f64, alpha: f64, beta: Option<f64>) -> Self {
        let delta = beta.filter(|b| *b > 0.0).map(|b| e / b + g * b);
        Self {
            det: e * g - f * f,
            alpha,
            beta,
            gamma: e / alpha + g * alpha,
            delta,
        }
    }

    /// `α = (√r + √s)/(1 + √(rs))`, `β = (√r − √s)/(1 − √(rs))` when `rs ≠ 1`.
    pub fn h5(form: &CanonicalForm) -> Result<Self, HermitianError> {
        let (r, s, e, f, g) = h5_params(form)?;
        let (sr, ss) = (r.sqrt(), s.sqrt());
        let alpha = (sr + ss) / (1.0 + sr * ss);
        let beta = (!approx_eq(r * s, 1.0)).then(|| (sr - ss) / (1.0 - sr * ss));
        Ok(Self::build(e, f, g, alpha, beta))
    }

    /// `α = (1 + √r)/√r`, `β = (1 − √r)/√r`.
    pub fn h4(form: &CanonicalForm) -> Result<Self, HermitianError> {
        let (r, e, f, g) = h4_params(form)?;
        let sr = r.sqrt();
        Ok(Self::build(e, f, g, (1.0 + sr) / sr, Some((1.0 - sr) / sr)))
    }

    /// `α = √(E/G)`.
    pub fn h6(form: &CanonicalForm) -> Result<Self, HermitianError> {
        let CanonicalForm::H6 { a: e, b: g } = *form else {
            return Err(mismatch(Builtin::H6, form));
        };
        realize(Builtin::H6, form)?;
        Ok(Self::build(e, 0.0, g, (e / g).sqrt(), None))
    }
}

fn mismatch(alg: Builtin, form: &CanonicalForm) -> HermitianError {
    HermitianError::InvalidForm(format!("expected a form for {alg}, got {}", form.kind()))
}

fn h5_params(form: &CanonicalForm) -> Result<(f64, f64, f64, f64, f64), HermitianError> {
    let CanonicalForm::H5 { r, s, e, f, g } = *form else {
        return Err(mismatch(Builtin::H5, form));
    };
    realize(Builtin::H5, form)?;
    Ok((r, s, e, f, g))
}

fn h4_params(form: &CanonicalForm) -> Result<(f64, f64, f64, f64), HermitianError> {
    let CanonicalForm::H4 { r, a, b, c } = *form else {
        return Err(mismatch(Builtin::H4, form));
    };
    realize(Builtin::H4, form)?;
    Ok((r, a, b, c))
}

/// The shared shape of the `h5` and `h4` families, with `p = √g22`, `q = √g44`.
fn four_block(branch: Branch, p: f64, q: f64, t: (f64, f64, f64), efg: (f64, f64, f64)) -> Mat6 {
    let (a, b, c) = t;
    let (e, f, g) = efg;
    let sd = (e * g - f * f).sqrt();
    let sign = if branch == Branch::J1 { 1.0 } else { -1.0 };
    #[rustfmt::skip]
    let m = Mat6::from_row_slice(&[
        0.0, -a * p, -b, -c * q, 0.0, 0.0,
        a / p, 0.0, -sign * c / p, sign * b * q / p, 0.0, 0.0,
        b, sign * c * p, 0.0, -sign * a * q, 0.0, 0.0,
        c / q, -sign * b * p / q, sign * a / q, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, -sign * f / sd, -sign * g / sd,
        0.0, 0.0, 0.0, 0.0, sign * e / sd, sign * f / sd,
    ]);
    m
}

fn triple(a: f64, b: f64, c: f64, branch: Branch) -> Result<SolutionTriple, HermitianError> {
    if branch != Branch::J1 && branch != Branch::J2 {
        return Err(HermitianError::InvalidParams("branch must be J1 or J2".into()));
    }
    SolutionTriple::new(a, b, c, branch)
}

/// The almost Hermitian structure `J1` or `J2` of an `h5` form at `(a, b, c)`.
pub fn h5_j(
    form: &CanonicalForm,
    branch: Branch,
    t: (f64, f64, f64),
) -> Result<AlmostComplexStructure, HermitianError> {
    let (r, s, e, f, g) = h5_params(form)?;
    triple(t.0, t.1, t.2, branch)?;
    Ok(AlmostComplexStructure::new(
        four_block(branch, r.sqrt(), s.sqrt(), t, (e, f, g)),
        Some(Builtin::H5),
    )?)
}

/// The almost Hermitian structure `J1` or `J2` of an `h4` form at `(a, b, c)`.
pub fn h4_j(
    form: &CanonicalForm,
    branch: Branch,
    t: (f64, f64, f64),
) -> Result<AlmostComplexStructure, HermitianError> {
    let (r, e, f, g) = h4_params(form)?;
    triple(t.0, t.1, t.2, branch)?;
    Ok(AlmostComplexStructure::new(
        four_block(branch, 1.0, r.sqrt(), t, (e, f, g)),
        Some(Builtin::H4),
    )?)
}

/// Solutions of the reduced system
/// `a = (1 − b²)√Δ/(Gk)`, `a = (1 − c²)k√Δ/E`, `Fa = bc√Δ`
/// on the unit sphere, for `k ≠ 0` of either sign.
fn reduced(e: f64, f: f64, g: f64, k: f64) -> Vec<(f64, f64, f64)> {
    let sd = (e * g - f * f).sqrt();
    let sk = k.signum();
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    if f != 0.0 {
        // a² − aγ/√Δ + 1 = 0; the root inside the unit interval, written without cancellation
        let gam = e / k + g * k;
        let disc = (gam * gam - 4.0 * sd * sd).max(0.0);
        let a = 2.0 * sd / (gam + gam.signum() * disc.sqrt());
        let b = (1.0 - g * a * k / sd).max(0.0).sqrt();
        let c = (1.0 - e * a / (k * sd)).max(0.0).sqrt() * sk * f.signum();
        out.push((a, b, c));
        out.push((a, -b, -c));
    } else {
        let (ratio, k2) = (e / g, k * k);
        if ratio <= k2 {
            let c = (1.0 - ratio / k2).max(0.0).sqrt();
            let a = e.sqrt() / (g.sqrt() * k);
            out.push((a, 0.0, c));
            out.push((a, 0.0, -c));
        }
        if k2 <= ratio {
            let b = (1.0 - k2 / ratio).max(0.0).sqrt();
            let a = g.sqrt() * k / e.sqrt();
            out.push((a, b, 0.0));
            out.push((a, -b, 0.0));
        }
    }
    let mut unique: Vec<(f64, f64, f64)> = Vec::new();
    for t in out {
        if !unique
            .iter()
            .any(|u| (u.0 - t.0).abs() + (u.1 - t.1).abs() + (u.2 - t.2).abs() <= 1e-14)
        {
            unique.push(t);
        }
    }
    unique
}

/// The Hermitian structures of both families for one canonical metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableSolutions {
    pub params: HermitianParams,
    pub j1: SolutionSet,
    pub j2: SolutionSet,
}

fn collect<F>(
    alg: Builtin,
    g: &Mat6,
    branch: Branch,
    triples: Vec<(f64, f64, f64)>,
    build: F,
) -> Result<SolutionSet, HermitianError>
where
    F: Fn(Branch, (f64, f64, f64)) -> Result<AlmostComplexStructure, HermitianError>,
{
    let mut out = Vec::with_capacity(triples.len());
    for t in triples {
        let j = build(branch, t)?;
        out.push(Solution::checked(
            alg,
            g,
            SolutionTriple::new(t.0, t.1, t.2, branch)?,
            j,
        ));
    }
    Ok(SolutionSet::Finite(out))
}

/// Every orientation preserving Hermitian structure of a canonical `h5` metric.
///
/// The `−J` partners, which reverse orientation, are reported through
/// [`Solution::negation_ok`].
pub fn h5_hermitian_solutions(form: &CanonicalForm) -> Result<TableSolutions, HermitianError> {
    let (r, s, e, f, g) = h5_params(form)?;
    let params = HermitianParams::h5(form)?;
    let metric = *realize(Builtin::H5, form)?.matrix();
    let build = |br, t| h5_j(form, br, t);
    let j1 = collect(Builtin::H5, &metric, Branch::J1, reduced(e, f, g, params.alpha), build)?;
    let j2 = if approx_eq(r, s) && approx_eq(r, 1.0) {
        SolutionSet::Sphere(Branch::J2)
    } else if approx_eq(r, s) {
        collect(
            Builtin::H5,
            &metric,
            Branch::J2,
            vec![(0.0, 1.0, 0.0), (0.0, -1.0, 0.0)],
            build,
        )?
    } else {
        let beta = (r.sqrt() - s.sqrt()) / (1.0 - (r * s).sqrt());
        collect(Builtin::H5, &metric, Branch::J2, reduced(e, f, g, -beta), build)?
    };
    Ok(TableSolutions { params, j1, j2 })
}

/// Every orientation preserving Hermitian structure of a canonical `h4` metric.
///
/// The `h4` equations are those of `h5` under `(a, b, c) ↦ (−b, a, c)`.
pub fn h4_hermitian_solutions(form: &CanonicalForm) -> Result<TableSolutions, HermitianError> {
    let (r, e, f, g) = h4_params(form)?;
    let params = HermitianParams::h4(form)?;
    let metric = *realize(Builtin::H4, form)?.matrix();
    let build = |br, t| h4_j(form, br, t);
    let rotate = |v: Vec<(f64, f64, f64)>| v.into_iter().map(|(a, b, c)| (b, -a, c)).collect();
    let j1 = collect(
        Builtin::H4,
        &metric,
        Branch::J1,
        rotate(reduced(e, f, g, params.alpha)),
        build,
    )?;
    let j2_triples = if approx_eq(r, 1.0) {
        vec![(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)]
    } else {
        rotate(reduced(e, f, g, params.beta.expect("β is always defined on h4")))
    };
    let j2 = collect(Builtin::H4, &metric, Branch::J2, j2_triples, build)?;
    Ok(TableSolutions { params, j1, j2 })
}
