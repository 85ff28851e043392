use nilmoduli_algebra::{
    is_abelian_structure, nijenhuis_residual, AlmostComplexStructure, Builtin, LieAlgebra, Mat6, PREDICATE_TOL,
};
use nilmoduli_moduli::{approx_eq, realize, CanonicalForm};
use serde::Serialize;

use crate::{Branch, HermitianError, SolutionTriple};

/// Bound on the integrability equations for a candidate to count as verified.
pub const H2_EQUATION_TOL: f64 = 1e-8;

/// Constants of an `h2` metric with `g13 = A`, `g24 = B`.
///
/// `alpha = √(1 − A²)`, `beta = √(1 − B²)`, `phi2 = Bα − Aβ`, `psi2 = AB + αβ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H2Params {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub det: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi2: f64,
    pub psi2: f64,
}

impl H2Params {
    pub fn new(form: &CanonicalForm) -> Result<Self, HermitianError> {
        let CanonicalForm::H2 { a, b, e, f, g } = *form else {
            return Err(HermitianError::InvalidForm(format!(
                "expected a form for h2, got {}",
                form.kind()
            )));
        };
        realize(Builtin::H2, form)?;
        let (alpha, beta) = ((1.0 - a * a).sqrt(), (1.0 - b * b).sqrt());
        Ok(Self {
            a,
            b,
            e,
            f,
            g,
            det: e * g - f * f,
            alpha,
            beta,
            phi2: b * alpha - a * beta,
            psi2: a * b + alpha * beta,
        })
    }

    /// The nine polynomial conditions for integrability of [`h2_j`] at `(a, b, c)`.
    pub fn equations(&self, t: (f64, f64, f64)) -> [f64; 9] {
        let (a, b, c) = t;
        let H2Params {
            a: aa,
            b: bb,
            e,
            f,
            g,
            det,
            alpha: al,
            beta: be,
            phi2: ph,
            psi2: ps,
        } = *self;
        let sd = det.sqrt();
        let u = 1.0 - a * a;
        [
            -a * a * be * ph + b * b * aa + c * c * bb * ps + a * c * (bb * ph - be * ps) - b * (f * al + g * be) / sd,
            a * b * sd + a * e * ph + c * (e * ps + f),
            u * sd + b * e * ph,
            (a * ph + c * ps).powi(2) + b * b + g * b * ph / sd,
            a * c * al + u * aa - b * (f * al + e * be) / sd,
            a * c * ph + u * ps - b * f * ph / sd,
            (c * ph - a * ps) * b * sd + a * f * ph + c * (f * ps + g),
            a * a * al * ph + b * b * bb + c * c * aa * ps + a * c * (aa * ph + al * ps) + b * (g * al + f * be) / sd,
            a * c * be - u * bb - b * (e * al + f * be) / sd,
        ]
    }
}

fn matrix(p: &H2Params, t: (f64, f64, f64)) -> Mat6 {
    let (a, b, c) = t;
    let H2Params {
        a: aa,
        b: bb,
        e,
        f,
        g,
        det,
        alpha: al,
        beta: be,
        phi2: ph,
        psi2: ps,
    } = *p;
    let sd = det.sqrt();
    let x = a * ph + c * ps;
    let y = a * al + aa * c;
    let z = a * be - bb * c;
    #[rustfmt::skip]
    let m = Mat6::from_row_slice(&[
        -aa * b / al, -y / al, -b / al, -x / al, 0.0, 0.0,
        z / be, bb * b / be, -x / be, b / be, 0.0, 0.0,
        b / al, c / al, aa * b / al, -z / al, 0.0, 0.0,
        c / be, -b / be, y / be, -bb * b / be, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, -f / sd, -g / sd,
        0.0, 0.0, 0.0, 0.0, e / sd, f / sd,
    ]);
    m
}

/// The almost Hermitian structure of one connected family on `h2` at `(a, b, c)`.
pub fn h2_j(form: &CanonicalForm, t: (f64, f64, f64)) -> Result<AlmostComplexStructure, HermitianError> {
    let p = H2Params::new(form)?;
    SolutionTriple::new(t.0, t.1, t.2, Branch::J1)?;
    Ok(AlmostComplexStructure::new(matrix(&p, t), Some(Builtin::H2))?)
}

/// A candidate from the reduction, with its checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H2Candidate {
    pub triple: SolutionTriple,
    /// Worst of the nine integrability equations.
    pub equation_residual: f64,
    pub nijenhuis: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H2Candidates {
    pub params: H2Params,
    pub candidates: Vec<H2Candidate>,
    /// Set when `A = B`, where the candidates are abelian.
    pub abelian: bool,
}

/// Candidates for integrable structures in the family of [`h2_j`].
///
/// With `φ = 0` the answer is `(±1, 0, 0)`. Otherwise two of the equations
/// give `b = −(1 − a²)√Δ/(Eφ)` and `c = −(1 − a²)(F/E + ψ)/(aφ)`, and
/// the sphere condition becomes a quadratic in `a²` with one nonnegative root.
pub fn h2_hermitian_candidates(form: &CanonicalForm) -> Result<H2Candidates, HermitianError> {
    let p = H2Params::new(form)?;
    let lie = LieAlgebra::builtin(Builtin::H2);
    let metric = *realize(Builtin::H2, form)?.matrix();
    let check = |t: (f64, f64, f64)| -> Result<H2Candidate, HermitianError> {
        let triple = SolutionTriple::new(t.0, t.1, t.2, Branch::J1)?;
        let eq = p.equations(t).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let j = matrix(&p, t);
        debug_assert!((j.transpose() * metric * j - metric).amax() < 1e-9);
        Ok(H2Candidate {
            triple,
            equation_residual: eq,
            nijenhuis: nijenhuis_residual(&lie, &j),
            verified: eq <= H2_EQUATION_TOL,
        })
    };
    if approx_eq(p.a, p.b) {
        let candidates = vec![check((1.0, 0.0, 0.0))?, check((-1.0, 0.0, 0.0))?];
        let abelian = candidates
            .iter()
            .all(|c| is_abelian_structure(&lie, &matrix(&p, (c.triple.a, c.triple.b, c.triple.c)), PREDICATE_TOL));
        return Ok(H2Candidates {
            params: p,
            candidates,
            abelian,
        });
    }
    let sd = p.det.sqrt();
    let ef = p.e * p.phi2;
    let k = p.f / p.e + p.psi2;
    let big_p = p.det / (ef * ef);
    let big_q = (k / p.phi2).powi(2);
    // P x² + (1 + Q − P) x − Q = 0 with x = a²
    let lin = 1.0 + big_q - big_p;
    let root = (lin * lin + 4.0 * big_p * big_q).sqrt();
    let x = if lin > 0.0 {
        2.0 * big_q / (lin + root)
    } else {
        (root - lin) / (2.0 * big_p)
    };
    let mut candidates = Vec::new();
    if x > 0.0 && x < 1.0 {
        for a in [x.sqrt(), -x.sqrt()] {
            let u = 1.0 - x;
            let b = -u * sd / ef;
            let c = -u * k / (a * p.phi2);
            candidates.push(check((a, b, c))?);
        }
    }
    Ok(H2Candidates {
        params: p,
        candidates,
        abelian: false,
    })
}
