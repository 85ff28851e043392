use nilmoduli_algebra::{hat_permutation, Builtin, Mat6};
use serde::{Deserialize, Serialize};

use crate::{Metric, ModuliError};

/// Orbit representatives, one family per algebra.
///
/// `H9` is written in the hat basis; [`realize`] moves it to the standard
/// basis when the target algebra is `Builtin::H9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum CanonicalForm {
    /// `diag(1, r, 1, s)` plus the block `[[E, F], [F, G]]`.
    H5 {
        r: f64,
        s: f64,
        #[serde(rename = "E")]
        e: f64,
        #[serde(rename = "F")]
        f: f64,
        #[serde(rename = "G")]
        g: f64,
    },
    /// `diag(1, 1, 1, 1, a, b)`.
    H6 { a: f64, b: f64 },
    /// `diag(1, 1, 1, r)` plus the block `[[a, b], [b, c]]`.
    H4 { r: f64, a: f64, b: f64, c: f64 },
    /// Unit diagonal with `g13 = a`, `g24 = b`, plus `[[E, F], [F, G]]`.
    H2 {
        a: f64,
        b: f64,
        #[serde(rename = "E")]
        e: f64,
        #[serde(rename = "F")]
        f: f64,
        #[serde(rename = "G")]
        g: f64,
    },
    /// `SᵀS` for the lower-triangular slice element `S(A, B, C, D, E, F)`.
    H9 {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
        #[serde(rename = "C")]
        c: f64,
        #[serde(rename = "D")]
        d: f64,
        #[serde(rename = "E")]
        e: f64,
        #[serde(rename = "F")]
        f: f64,
    },
}

fn require(ok: bool, what: &str) -> Result<(), ModuliError> {
    if ok {
        Ok(())
    } else {
        Err(ModuliError::InvalidForm(what.to_string()))
    }
}

impl CanonicalForm {
    pub fn kind(&self) -> &'static str {
        match self {
            CanonicalForm::H5 { .. } => "H5",
            CanonicalForm::H6 { .. } => "H6",
            CanonicalForm::H4 { .. } => "H4",
            CanonicalForm::H2 { .. } => "H2",
            CanonicalForm::H9 { .. } => "H9",
        }
    }

    pub fn fits(&self, alg: Builtin) -> bool {
        matches!(
            (self, alg),
            (CanonicalForm::H5 { .. }, Builtin::H5)
                | (CanonicalForm::H6 { .. }, Builtin::H6)
                | (CanonicalForm::H4 { .. }, Builtin::H4)
                | (CanonicalForm::H2 { .. }, Builtin::H2)
                | (CanonicalForm::H9 { .. }, Builtin::H9 | Builtin::H9Hat)
        )
    }

    /// The form of the identity metric.
    pub fn identity(alg: Builtin) -> Self {
        match alg {
            Builtin::H5 => CanonicalForm::H5 {
                r: 1.0,
                s: 1.0,
                e: 1.0,
                f: 0.0,
                g: 1.0,
            },
            Builtin::H6 => CanonicalForm::H6 { a: 1.0, b: 1.0 },
            Builtin::H4 => CanonicalForm::H4 {
                r: 1.0,
                a: 1.0,
                b: 0.0,
                c: 1.0,
            },
            Builtin::H2 => CanonicalForm::H2 {
                a: 0.0,
                b: 0.0,
                e: 1.0,
                f: 0.0,
                g: 1.0,
            },
            Builtin::H9 | Builtin::H9Hat => CanonicalForm::H9 {
                a: 1.0,
                b: 1.0,
                c: 1.0,
                d: 0.0,
                e: 0.0,
                f: 0.0,
            },
        }
    }

    /// Named parameters in declaration order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            CanonicalForm::H5 { r, s, e, f, g } => vec![("r", r), ("s", s), ("E", e), ("F", f), ("G", g)],
            CanonicalForm::H6 { a, b } => vec![("a", a), ("b", b)],
            CanonicalForm::H4 { r, a, b, c } => vec![("r", r), ("a", a), ("b", b), ("c", c)],
            CanonicalForm::H2 { a, b, e, f, g } => vec![("a", a), ("b", b), ("E", e), ("F", f), ("G", g)],
            CanonicalForm::H9 { a, b, c, d, e, f } => {
                vec![("A", a), ("B", b), ("C", c), ("D", d), ("E", e), ("F", f)]
            }
        }
    }

    /// Largest parameter difference, or `None` across families.
    pub fn distance(&self, other: &CanonicalForm) -> Option<f64> {
        if self.kind() != other.kind() {
            return None;
        }
        let d = self
            .params()
            .iter()
            .zip(other.params())
            .fold(0.0_f64, |acc, ((_, x), (_, y))| acc.max((x - y).abs()));
        Some(d)
    }

    /// Range constraints of the family.
    ///
    /// For `H2` the sign of `F` is an invariant once `a > 0`, so `F ≥ 0`
    /// is imposed only at `a = 0`; the exchange of the two planes forces
    /// `E ≤ G`. For `H9` the sign-diagonal automorphisms make `D, E, F ≥ 0`.
    pub fn validate(&self) -> Result<(), ModuliError> {
        let finite = self.params().iter().all(|(_, v)| v.is_finite());
        require(finite, "parameters must be finite")?;
        match *self {
            CanonicalForm::H5 { r, s, e, f, g } => {
                require(0.0 < s && s <= r && r <= 1.0, "0 < s ≤ r ≤ 1")?;
                require(f >= 0.0, "F ≥ 0")?;
                require(e > 0.0 && e * g - f * f > 0.0, "E > 0 and EG − F² > 0")
            }
            CanonicalForm::H6 { a, b } => require(0.0 < a && a <= b, "0 < a ≤ b"),
            CanonicalForm::H4 { r, a, b, c } => {
                require(0.0 < r && r <= 1.0, "0 < r ≤ 1")?;
                require(a >= 0.0 && b >= 0.0 && c >= 0.0, "a, b, c ≥ 0")?;
                require(a * c - b * b > 0.0, "ac − b² > 0")
            }
            CanonicalForm::H2 { a, b, e, f, g } => {
                require(0.0 <= a && a <= b && b < 1.0, "0 ≤ a ≤ b < 1")?;
                require(e > 0.0 && e * g - f * f > 0.0, "E > 0 and EG − F² > 0")?;
                require(e <= g, "E ≤ G")?;
                require(a > 0.0 || f >= 0.0, "F ≥ 0 when a = 0")
            }
            CanonicalForm::H9 { a, b, c, d, e, f } => {
                require(a > 0.0 && b > 0.0 && c > 0.0, "A, B, C > 0")?;
                require(d >= 0.0 && e >= 0.0 && f >= 0.0, "D, E, F ≥ 0")
            }
        }
    }

    /// Matrix in the working basis (hat basis for `H9`).
    pub(crate) fn matrix(&self) -> Mat6 {
        let mut m = Mat6::zeros();
        match *self {
            CanonicalForm::H5 { r, s, e, f, g } => {
                m.set_partial_diagonal([1.0, r, 1.0, s, e, g].into_iter());
                m[(4, 5)] = f;
                m[(5, 4)] = f;
            }
            CanonicalForm::H6 { a, b } => {
                m.set_partial_diagonal([1.0, 1.0, 1.0, 1.0, a, b].into_iter());
            }
            CanonicalForm::H4 { r, a, b, c } => {
                m.set_partial_diagonal([1.0, 1.0, 1.0, r, a, c].into_iter());
                m[(4, 5)] = b;
                m[(5, 4)] = b;
            }
            CanonicalForm::H2 { a, b, e, f, g } => {
                m.set_partial_diagonal([1.0, 1.0, 1.0, 1.0, e, g].into_iter());
                for (i, j, v) in [(0, 2, a), (1, 3, b), (4, 5, f)] {
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            CanonicalForm::H9 { .. } => {
                let s = self.h9_slice();
                m = s.transpose() * s;
            }
        }
        m
    }

    /// The slice element `S` with `realize = SᵀS` (hat basis).
    pub(crate) fn h9_slice(&self) -> Mat6 {
        let CanonicalForm::H9 { a, b, c, d, e, f } = *self else {
            panic!("not an h9 form");
        };
        let mut s = Mat6::identity();
        s[(2, 2)] = a;
        s[(4, 2)] = d;
        s[(4, 3)] = e;
        s[(4, 4)] = b;
        s[(5, 4)] = f;
        s[(5, 5)] = c;
        s
    }
}

/// The metric of a canonical form on `alg`.
pub fn realize(alg: Builtin, form: &CanonicalForm) -> Result<Metric, ModuliError> {
    if !form.fits(alg) {
        return Err(ModuliError::Mismatch {
            expected: alg,
            found: form.kind(),
        });
    }
    form.validate()?;
    let mut m = form.matrix();
    if alg == Builtin::H9 {
        let p = hat_permutation();
        m = p * m * p;
    }
    Metric::new(alg, m)
}
