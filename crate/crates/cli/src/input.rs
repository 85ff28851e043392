use std::fs;

use nilmoduli_algebra::{parse_salamon, Builtin, LieAlgebra, Mat6, DIM};
use nilmoduli_moduli::{CanonicalForm, Metric};
use serde_json::Value;

use crate::CliError;

/// A built-in label or a Salamon string.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra, CliError> {
    match text.parse::<Builtin>() {
        Ok(b) => Ok(LieAlgebra::builtin(b)),
        Err(_) if text.trim_start().starts_with('(') => Ok(parse_salamon(text)?),
        Err(e) => Err(e.into()),
    }
}

pub fn parse_builtin(text: &str) -> Result<Builtin, CliError> {
    Ok(text.parse::<Builtin>()?)
}

/// Inline JSON, or `@path` to read it from a file.
pub fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn tag(alg: Builtin) -> &'static str {
    match alg {
        Builtin::H2 => "H2",
        Builtin::H4 => "H4",
        Builtin::H5 => "H5",
        Builtin::H6 => "H6",
        Builtin::H9 | Builtin::H9Hat => "H9",
    }
}

/// A canonical form; the `"form"` tag may be left out and is then taken
/// from the algebra.
pub fn parse_form(alg: Builtin, v: Value) -> Result<CanonicalForm, CliError> {
    let Value::Object(mut map) = v else {
        return Err(CliError::Input("form must be a JSON object".into()));
    };
    map.entry("form").or_insert_with(|| Value::String(tag(alg).into()));
    let form: CanonicalForm = serde_json::from_value(Value::Object(map))?;
    if !form.fits(alg) {
        return Err(CliError::Input(format!(
            "a {} form does not describe {alg}",
            form.kind()
        )));
    }
    Ok(form)
}

/// A 6×6 matrix given as nested rows, 36 numbers, or `{"matrix": ...}`.
pub fn parse_matrix(v: &Value) -> Result<Mat6, CliError> {
    let bad = || CliError::Input("expected a 6×6 matrix".into());
    let v = v.get("matrix").unwrap_or(v);
    let items = v.as_array().ok_or_else(bad)?;
    let flat: Vec<f64> = if items.len() == DIM && items.iter().all(Value::is_array) {
        items
            .iter()
            .map(|row| row.as_array().filter(|r| r.len() == DIM).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .map(|x| x.as_f64().ok_or_else(bad))
            .collect::<Result<_, _>>()?
    } else if items.len() == DIM * DIM {
        items
            .iter()
            .map(|x| x.as_f64().ok_or_else(bad))
            .collect::<Result<_, _>>()?
    } else {
        return Err(bad());
    };
    Ok(Mat6::from_row_slice(&flat))
}

/// A metric from JSON; asymmetric input is rejected rather than symmetrized.
pub fn parse_metric(alg: Builtin, v: &Value) -> Result<Metric, CliError> {
    let m = parse_matrix(v)?;
    if (m - m.transpose()).amax() > 1e-12 * m.amax().max(1.0) {
        return Err(CliError::Input("metric matrix is not symmetric".into()));
    }
    Ok(Metric::symmetrized(alg, &m)?)
}
