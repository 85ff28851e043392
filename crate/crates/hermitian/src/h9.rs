use nilmoduli_algebra::{AlmostComplexStructure, Builtin, LieAlgebra, Mat6};
use nilmoduli_automorphisms::{Automorphism, DERIVATION_TOL};
use nilmoduli_moduli::{CanonicalForm, Metric};
use serde::Serialize;

use crate::{HermitianError, Residuals};

/// The abelian complex structure on `h9` in the hat basis:
/// `J0 ê1 = −ê2`, `J0 ê3 = ê5`, `J0 ê4 = −ê6`.
pub fn h9_j0() -> AlmostComplexStructure {
    let mut j = Mat6::zeros();
    for (from, to, s) in [(0, 1, -1.0), (2, 4, 1.0), (3, 5, -1.0)] {
        j[(to, from)] = s;
        j[(from, to)] = -s;
    }
    AlmostComplexStructure::new(j, Some(Builtin::H9Hat)).expect("J0² = −I")
}

/// The three families of metrics made Hermitian by conjugating `J0` with a
/// one-parameter subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Sigma {
    /// Conjugation by `I + a63 ê6⊗ê³` with `a63 = AE/√(E² + 1)`.
    One { a: f64, e: f64 },
    /// Conjugation by `I + a43 ê4⊗ê³` with `a43 = −F`.
    Two { a: f64, f: f64 },
    /// Conjugation by `diag(a11, a11, a11², a44, a11², a11³)`; the metric is
    /// `diag(1, 1, A², 1, A², C²)` with `C = a44/a11³`.
    Three { a11: f64, a44: f64, a: f64 },
}

/// A metric in the hat basis with its automorphism and Hermitian structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaMember {
    pub metric: Metric,
    pub automorphism: Automorphism,
    #[serde(skip)]
    pub j: AlmostComplexStructure,
    pub residuals: Residuals,
}

fn positive(v: f64, what: &str) -> Result<(), HermitianError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(HermitianError::InvalidParams(format!("{what} must be positive")))
    }
}

fn finite(v: f64, what: &str) -> Result<(), HermitianError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(HermitianError::InvalidParams(format!("{what} must be finite")))
    }
}

fn member(g: Mat6, phi: Mat6) -> Result<SigmaMember, HermitianError> {
    let metric = Metric::symmetrized(Builtin::H9Hat, &g)?;
    let automorphism = Automorphism::new(Builtin::H9Hat, phi, DERIVATION_TOL)
        .map_err(|e| HermitianError::InvalidParams(e.to_string()))?;
    let j = h9_j0().conjugate(&phi)?;
    let residuals = Residuals::of(&LieAlgebra::builtin(Builtin::H9Hat), metric.matrix(), j.matrix());
    Ok(SigmaMember {
        metric,
        automorphism,
        j,
        residuals,
    })
}

/// A member of one of the families `Σ1`, `Σ2`, `Σ3`.
pub fn h9_sigma_family(which: Sigma) -> Result<SigmaMember, HermitianError> {
    let mut g = Mat6::identity();
    let mut phi = Mat6::identity();
    match which {
        Sigma::One { a, e } => {
            positive(a, "A")?;
            finite(e, "E")?;
            let w = e * e + 1.0;
            g[(2, 2)] = a * a;
            g[(3, 3)] = w;
            g[(3, 4)] = w.sqrt() * a * e;
            g[(4, 3)] = g[(3, 4)];
            g[(4, 4)] = w * a * a;
            g[(5, 5)] = w;
            phi[(5, 2)] = a * e / w.sqrt();
        }
        Sigma::Two { a, f } => {
            positive(a, "A")?;
            finite(f, "F")?;
            g[(2, 2)] = a * a;
            g[(4, 4)] = a * a + f * f;
            g[(4, 5)] = f;
            g[(5, 4)] = f;
            phi[(3, 2)] = -f;
        }
        Sigma::Three { a11, a44, a } => {
            positive(a11, "a11")?;
            positive(a44, "a44")?;
            positive(a, "A")?;
            let c = a44 / a11.powi(3);
            g = Mat6::from_diagonal(&nalgebra::Vector6::new(1.0, 1.0, a * a, 1.0, a * a, c * c));
            phi = Mat6::from_diagonal(&nalgebra::Vector6::new(
                a11,
                a11,
                a11 * a11,
                a44,
                a11 * a11,
                a11.powi(3),
            ));
        }
    }
    member(g, phi)
}

/// A slice metric made Hermitian by conjugating `J0` with an element of `G′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GPrime {
    /// Slice parameters; `E` and `F` carry the signs of `a63` and `−a43`.
    pub form: CanonicalForm,
    pub member: SigmaMember,
}

/// The metric attached to `φ′ ∈ G′` with entries `a11, a43, a44, a63`, and
/// its Hermitian structure `φ′ J0 φ′⁻¹`.
pub fn h9_gprime_metric(a11: f64, a43: f64, a44: f64, a63: f64, a: f64) -> Result<GPrime, HermitianError> {
    positive(a11, "a11")?;
    positive(a44, "a44")?;
    positive(a, "A")?;
    finite(a43, "a43")?;
    finite(a63, "a63")?;
    let radicand = a * a * a11.powi(10) - a44 * a44 * a63 * a63;
    if !(radicand > 0.0) {
        return Err(HermitianError::InvalidParams(format!(
            "A²a11¹⁰ − a44²a63² = {radicand:e} must be positive"
        )));
    }
    let root = radicand.sqrt();
    let (b, c) = (a * a * a11.powi(5) / root, a * a11 * a11 * a44 / root);
    let (e, f) = (a44 * a63 / root, -a * a11.powi(3) * a43 / root);
    let mut s = Mat6::identity();
    s[(2, 2)] = a;
    s[(4, 3)] = e;
    s[(4, 4)] = b;
    s[(5, 4)] = f;
    s[(5, 5)] = c;
    let mut phi = Mat6::from_diagonal(&nalgebra::Vector6::new(
        a11,
        a11,
        a11 * a11,
        a44,
        a11 * a11,
        a11.powi(3),
    ));
    phi[(3, 2)] = a43;
    phi[(5, 2)] = a63;
    let member = member(s.transpose() * s, phi)?;
    Ok(GPrime {
        form: CanonicalForm::H9 { a, b, c, d: 0.0, e, f },
        member,
    })
}
