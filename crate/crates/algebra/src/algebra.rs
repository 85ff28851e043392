use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::salamon::{parse_salamon, render_differential};
use crate::{AlgebraError, Mat6, Vector};

pub const DIM: usize = 6;

/// The built-in algebras. `H9Hat` is `h9` in the permuted basis
/// `ê1=e2, ê2=e1, ê3=e4, ê4=e3, ê5=e5, ê6=e6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    H2,
    H4,
    H5,
    H6,
    H9,
    H9Hat,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::H2,
        Builtin::H4,
        Builtin::H5,
        Builtin::H6,
        Builtin::H9,
        Builtin::H9Hat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::H2 => "h2",
            Builtin::H4 => "h4",
            Builtin::H5 => "h5",
            Builtin::H6 => "h6",
            Builtin::H9 => "h9",
            Builtin::H9Hat => "h9hat",
        }
    }

    /// Salamon notation. For `H9Hat` the positive `[ê1, ê2] = ê5`
    /// shows up as the signed term `-12`.
    pub fn salamon(self) -> &'static str {
        match self {
            Builtin::H2 => "(0,0,0,0,12,34)",
            Builtin::H4 => "(0,0,0,0,12,14+23)",
            Builtin::H5 => "(0,0,0,0,13+42,14+23)",
            Builtin::H6 => "(0,0,0,0,12,13)",
            Builtin::H9 => "(0,0,0,0,12,14+25)",
            Builtin::H9Hat => "(0,0,0,0,-12,15+23)",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| AlgebraError::UnknownAlgebra(s.to_string()))
    }
}

/// A real Lie algebra of dimension six given by structure constants.
///
/// `c[k][i][j] = c^k_{ij}` is stored for all `i, j` and is antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    label: Option<Builtin>,
    c: [[[f64; DIM]; DIM]; DIM],
}

impl LieAlgebra {
    /// Builds an algebra from `c^k_{ij}` given for `i < j` (0-based
    /// `(k, i, j)` triples). Entries with `i ≥ j` are ignored.
    pub fn from_upper(entries: &[(usize, usize, usize, f64)]) -> Self {
        let mut c = [[[0.0; DIM]; DIM]; DIM];
        for &(k, i, j, v) in entries {
            if i < j {
                c[k][i][j] += v;
                c[k][j][i] -= v;
            }
        }
        Self { label: None, c }
    }

    pub(crate) fn from_tensor(c: [[[f64; DIM]; DIM]; DIM]) -> Self {
        Self { label: None, c }
    }

    pub fn abelian() -> Self {
        Self::from_upper(&[])
    }

    pub fn builtin(id: Builtin) -> Self {
        let mut alg = match id {
            Builtin::H9Hat => {
                // [ê1,ê2] = ê5, [ê1,ê5] = [ê2,ê3] = −ê6
                Self::from_upper(&[(4, 0, 1, -1.0), (5, 0, 4, 1.0), (5, 1, 2, 1.0)])
            }
            other => parse_salamon(other.salamon()).expect("built-in notation parses"),
        };
        alg.label = Some(id);
        alg
    }

    pub fn label(&self) -> Option<Builtin> {
        self.label
    }

    pub fn label_name(&self) -> &'static str {
        self.label.map_or("custom", Builtin::name)
    }

    pub fn with_label(mut self, label: Option<Builtin>) -> Self {
        self.label = label;
        self
    }

    pub fn dim(&self) -> usize {
        DIM
    }

    /// `c^k_{ij}` for 0-based indices.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[k][i][j]
    }

    /// `[X, Y]`, with `e^k([X,Y]) = −Σ c^k_{ij} X^i Y^j`.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros();
        for k in 0..DIM {
            let mut s = 0.0;
            for i in 0..DIM {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..DIM {
                    s += self.c[k][i][j] * x[i] * y[j];
                }
            }
            out[k] = -s;
        }
        out
    }

    /// `[e_i, e_j]` for 0-based indices.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        Vector::from_fn(|k, _| -self.c[k][i][j])
    }

    /// Matrix of `ad_X = [X, ·]`.
    pub fn ad(&self, x: &Vector) -> Mat6 {
        Mat6::from_fn(|k, j| -(0..DIM).map(|i| self.c[k][i][j] * x[i]).sum::<f64>())
    }

    /// Max-norm of the cyclic Jacobi sum over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let e = |i: usize| Vector::ith(i, 1.0);
        let mut worst = 0.0_f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let (x, y, z) = (e(i), e(j), e(k));
                    let s = self.bracket(&self.bracket(&x, &y), &z)
                        + self.bracket(&self.bracket(&y, &z), &x)
                        + self.bracket(&self.bracket(&z, &x), &y);
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    /// The algebra with bracket `[x, y]' = P⁻¹[Px, Py]`.
    pub fn change_of_basis(&self, p: &Mat6) -> Result<LieAlgebra, AlgebraError> {
        let sv = p.singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        if !(smin > 0.0) || !smax.is_finite() || smin / smax < 1e-14 {
            return Err(AlgebraError::SingularMatrix);
        }
        let pinv = p.try_inverse().ok_or(AlgebraError::SingularMatrix)?;
        let mut c = [[[0.0; DIM]; DIM]; DIM];
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let b = pinv * self.bracket(&p.column(i).into(), &p.column(j).into());
                for k in 0..DIM {
                    c[k][i][j] = -b[k];
                    c[k][j][i] = b[k];
                }
            }
        }
        Ok(LieAlgebra::from_tensor(c))
    }

    /// `dθ` for a covector `θ` given in the dual basis.
    pub fn exterior_derivative(&self, theta: &Vector) -> TwoForm {
        let mut form = TwoForm::zero();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let v: f64 = (0..DIM).map(|k| theta[k] * self.c[k][i][j]).sum();
                form.set(i, j, v);
            }
        }
        form
    }

    /// Dimensions of the lower central series `C¹ = 𝔥, C^{s+1} = [𝔥, C^s]`
    /// until it vanishes or stabilizes.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let mut span = DMatrix::<f64>::identity(DIM, DIM);
        let mut dims = vec![DIM];
        loop {
            let mut cols = Vec::new();
            for i in 0..DIM {
                let ei = Vector::ith(i, 1.0);
                for s in span.column_iter() {
                    let v = Vector::from_iterator(s.iter().cloned());
                    cols.push(self.bracket(&ei, &v));
                }
            }
            let next = orthonormal_span(&cols, 1e-10 * self.max_constant());
            let d = next.ncols();
            let last = *dims.last().unwrap();
            dims.push(d);
            if d == 0 || d == last {
                return dims;
            }
            span = next;
        }
    }

    /// Smallest `s` with `C^{s+1} = 0`.
    pub fn nilpotency_step(&self) -> Result<usize, AlgebraError> {
        let dims = self.lower_central_series();
        let last = *dims.last().unwrap();
        if last != 0 {
            return Err(AlgebraError::NotNilpotent(last));
        }
        Ok(dims.len() - 1)
    }

    /// Per-differential Salamon terms, e.g. `["0", …, "13+42", "14+23"]`.
    ///
    /// Built-ins render their stored notation; other algebras render
    /// `i<j` pairs with signed coefficients.
    pub fn differentials(&self) -> Vec<String> {
        if let Some(b) = self.label {
            if *self == LieAlgebra::builtin(b) {
                let s = b.salamon();
                return s[1..s.len() - 1].split(',').map(str::to_string).collect();
            }
        }
        (0..DIM).map(|k| render_differential(&self.c[k])).collect()
    }

    pub fn salamon(&self) -> String {
        format!("({})", self.differentials().join(","))
    }

    /// Largest `|c^k_{ij}|`.
    pub fn max_constant(&self) -> f64 {
        self.c.iter().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Non-zero brackets `[e_i, e_j]` with `i < j`, as 0-based index pairs.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vector)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let b = self.bracket_basis(i, j);
                if b.amax() > 0.0 {
                    out.push((i, j, b));
                }
            }
        }
        out
    }
}

/// Permutation `P` with `P ê_i = e_{π(i)}` for `ê1=e2, ê2=e1, ê3=e4, ê4=e3`.
///
/// `P` is an involution, and `builtin(H9).change_of_basis(P) = builtin(H9Hat)`.
pub fn hat_permutation() -> Mat6 {
    let mut p = Mat6::zeros();
    for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2), (4, 4), (5, 5)] {
        p[(i, j)] = 1.0;
    }
    p
}

/// Orthonormal basis of the span, dropping singular values `≤ cutoff`.
fn orthonormal_span(cols: &[Vector], cutoff: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(DIM, cols.len(), |i, j| cols[j][i]);
    if m.amax() <= cutoff {
        return DMatrix::zeros(DIM, 0);
    }
    let svd = m.svd(true, false);
    let u = svd.u.expect("left vectors requested");
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff)
        .map(|(k, _)| k)
        .collect();
    DMatrix::from_fn(DIM, keep.len(), |i, j| u[(i, keep[j])])
}

/// A two-form on the basis `e^{ij}`, `i < j`, stored strictly upper-triangular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoForm {
    coeffs: [f64; 15],
}

impl TwoForm {
    pub fn zero() -> Self {
        Self { coeffs: [0.0; 15] }
    }

    fn index(i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < DIM);
        // row offsets 0, 5, 9, 12, 14
        i * (2 * DIM - i - 1) / 2 + (j - i - 1)
    }

    /// Coefficient of `e^{ij}`; antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs[Self::index(i, j)],
            std::cmp::Ordering::Greater => -self.coeffs[Self::index(j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.coeffs[Self::index(i, j)] = v;
    }

    pub fn coeffs(&self) -> &[f64; 15] {
        &self.coeffs
    }

    /// The single term `e^{ij}`.
    pub fn basis(i: usize, j: usize) -> Self {
        let mut f = Self::zero();
        f.set(i, j, 1.0);
        f
    }
}

impl std::ops::Add for TwoForm {
    type Output = TwoForm;

    fn add(mut self, rhs: TwoForm) -> TwoForm {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    label: String,
    dim: usize,
    d: Vec<String>,
}

impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraJson {
            label: self.label_name().to_string(),
            dim: DIM,
            d: self.differentials(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        if raw.dim != DIM {
            return Err(serde::de::Error::custom(format!("unsupported dimension {}", raw.dim)));
        }
        let alg = parse_salamon(&format!("({})", raw.d.join(","))).map_err(serde::de::Error::custom)?;
        let label = raw.label.parse::<Builtin>().ok();
        // keep a built-in label only when the tensor really is that algebra
        let label = label.filter(|b| alg == LieAlgebra::builtin(*b).with_label(None));
        Ok(alg.with_label(label))
    }
}
