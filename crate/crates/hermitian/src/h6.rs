use nilmoduli_algebra::{AlmostComplexStructure, Builtin, Mat6};
use nilmoduli_moduli::{realize, CanonicalForm};

use crate::{Branch, HermitianError, HermitianParams, Solution, SolutionTriple};

/// `J1±` and `J2±` for `g = diag(1, 1, 1, 1, E, G)`, `α = √(E/G)`.
fn h6_matrix(branch: Branch, alpha: f64) -> Mat6 {
    let w = (1.0 - alpha * alpha).max(0.0).sqrt();
    let (al, ia) = (alpha, 1.0 / alpha);
    #[rustfmt::skip]
    let m = match branch {
        Branch::J1Plus | Branch::J1Minus => {
            let pm = if branch == Branch::J1Plus { w } else { -w };
            [
                0.0, 0.0, pm, -al, 0.0, 0.0,
                0.0, 0.0, -al, -pm, 0.0, 0.0,
                -pm, al, 0.0, 0.0, 0.0, 0.0,
                al, pm, 0.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 0.0, 0.0, -ia,
                0.0, 0.0, 0.0, 0.0, al, 0.0,
            ]
        }
        _ => {
            let pm = if branch == Branch::J2Plus { w } else { -w };
            [
                0.0, 0.0, pm, -al, 0.0, 0.0,
                0.0, 0.0, al, pm, 0.0, 0.0,
                -pm, -al, 0.0, 0.0, 0.0, 0.0,
                al, -pm, 0.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 0.0, 0.0, ia,
                0.0, 0.0, 0.0, 0.0, -al, 0.0,
            ]
        }
    };
    Mat6::from_row_slice(&m)
}

/// The four orientation preserving Hermitian structures `J1±`, `J2±` of a
/// canonical `h6` metric, with `(E, G)` the two entries of the form.
///
/// The triple records `(α, ±√(1 − α²), 0)`.
pub fn h6_hermitian_solutions(form: &CanonicalForm) -> Result<[Solution; 4], HermitianError> {
    let CanonicalForm::H6 { a: e, b: g } = *form else {
        return Err(HermitianError::InvalidForm(format!(
            "expected a form for h6, got {}",
            form.kind()
        )));
    };
    if !(e <= g) {
        return Err(HermitianError::InvalidForm("E ≤ G".into()));
    }
    let metric = *realize(Builtin::H6, form)?.matrix();
    let alpha = HermitianParams::h6(form)?.alpha;
    let w = (1.0 - alpha * alpha).max(0.0).sqrt();
    let one = |branch: Branch, sign: f64| -> Result<Solution, HermitianError> {
        let j = AlmostComplexStructure::new(h6_matrix(branch, alpha), Some(Builtin::H6))?;
        let t = SolutionTriple {
            a: alpha,
            b: sign * w,
            c: 0.0,
            branch,
        };
        Ok(Solution::checked(Builtin::H6, &metric, t, j))
    };
    Ok([
        one(Branch::J1Plus, 1.0)?,
        one(Branch::J1Minus, -1.0)?,
        one(Branch::J2Plus, 1.0)?,
        one(Branch::J2Minus, -1.0)?,
    ])
}
