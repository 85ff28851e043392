use nilmoduli_algebra::{AlmostComplexStructure, Builtin};
use nilmoduli_moduli::{canonicalize, CanonicalForm, Metric, Witness};

use crate::{
    h2_hermitian_candidates, h2_j, h4_hermitian_solutions, h5_hermitian_solutions, h6_hermitian_solutions, Branch,
    HermitianError, SolutionSet,
};

/// Closed-form Hermitian structures of an arbitrary metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStructures {
    pub form: CanonicalForm,
    pub witness: Witness,
    /// Structures compatible with the input metric.
    pub structures: Vec<AlmostComplexStructure>,
    /// Set when a whole sphere of structures exists at the canonical form.
    pub sphere: Option<Branch>,
}

/// `φ⁻¹ J φ`, compatible with `φᵀ g φ` whenever `J` is compatible with `g`.
pub fn transport(j: &AlmostComplexStructure, witness: &Witness) -> Result<AlmostComplexStructure, HermitianError> {
    let inv = witness.automorphism.inverse();
    Ok(j.conjugate(&inv.matrix)?)
}

fn push_set(out: &mut Vec<AlmostComplexStructure>, sphere: &mut Option<Branch>, set: SolutionSet) {
    match set {
        SolutionSet::Finite(v) => out.extend(v.into_iter().map(|s| s.j)),
        SolutionSet::Sphere(b) => *sphere = Some(b),
    }
}

/// Canonicalizes `g`, takes the closed-form structures at the canonical
/// form and carries them back through the witness.
///
/// `h2` contributes its verified candidates only. `h9` has no closed form.
pub fn hermitian_structures(g: &Metric) -> Result<MetricStructures, HermitianError> {
    let alg = g.algebra();
    if matches!(alg, Builtin::H9 | Builtin::H9Hat) {
        return Err(HermitianError::InvalidForm(format!(
            "no closed-form structures on {alg}"
        )));
    }
    let (form, witness) = canonicalize(g)?;
    let mut at_form = Vec::new();
    let mut sphere = None;
    match alg {
        Builtin::H5 | Builtin::H4 => {
            let t = if alg == Builtin::H5 {
                h5_hermitian_solutions(&form)?
            } else {
                h4_hermitian_solutions(&form)?
            };
            push_set(&mut at_form, &mut sphere, t.j1);
            push_set(&mut at_form, &mut sphere, t.j2);
        }
        Builtin::H6 => at_form.extend(h6_hermitian_solutions(&form)?.into_iter().map(|s| s.j)),
        _ => {
            for c in h2_hermitian_candidates(&form)?
                .candidates
                .into_iter()
                .filter(|c| c.verified)
            {
                at_form.push(h2_j(&form, (c.triple.a, c.triple.b, c.triple.c))?);
            }
        }
    }
    let structures = at_form
        .iter()
        .map(|j| transport(j, &witness))
        .collect::<Result<_, _>>()?;
    Ok(MetricStructures {
        form,
        witness,
        structures,
        sphere,
    })
}
