//! Salamon notation: `(0,0,0,0,12,14+23)` lists `de^1, …, de^6`.
//!
//! A term is a two-digit pair `ij` meaning `e^{ij}`, optionally signed and
//! optionally scaled as `c*ij`. A pair with `i > j` denotes `e^{ij} = −e^{ji}`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{LieAlgebra, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Not `DIM` comma-separated entries.
    Arity(usize),
    Malformed,
    IndexOutOfRange,
    RepeatedIndex,
    /// `de^k` uses an index `≥ k`.
    NotTriangular,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Arity(n) => write!(f, "expected {DIM} differentials, found {n}"),
            ParseErrorKind::Malformed => f.write_str("malformed term"),
            ParseErrorKind::IndexOutOfRange => write!(f, "index outside 1..{DIM}"),
            ParseErrorKind::RepeatedIndex => f.write_str("pair with equal indices"),
            ParseErrorKind::NotTriangular => f.write_str("differential de^k may only involve e^i with i < k"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

fn err(position: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { position, kind }
}

/// Parses a Salamon string into structure constants.
pub fn parse_salamon(text: &str) -> Result<LieAlgebra, ParseError> {
    let bytes = text.as_bytes();
    let mut start = 0;
    let mut end = bytes.len();
    while start < end && bytes[start].is_ascii_whitespace() {
        start += 1;
    }
    while end > start && bytes[end - 1].is_ascii_whitespace() {
        end -= 1;
    }
    if start < end && bytes[start] == b'(' {
        if bytes[end - 1] != b')' {
            return Err(err(end.saturating_sub(1), ParseErrorKind::Malformed));
        }
        start += 1;
        end -= 1;
    }
    let mut entries = Vec::new();
    let mut offset = start;
    let body = &text[start..end];
    let pieces: Vec<&str> = body.split(',').collect();
    if pieces.len() != DIM {
        return Err(err(start, ParseErrorKind::Arity(pieces.len())));
    }
    for (k, piece) in pieces.iter().enumerate() {
        parse_differential(piece, offset, k, &mut entries)?;
        offset += piece.len() + 1;
    }
    Ok(LieAlgebra::from_upper(&entries))
}

fn parse_differential(
    piece: &str,
    offset: usize,
    k: usize,
    entries: &mut Vec<(usize, usize, usize, f64)>,
) -> Result<(), ParseError> {
    let b = piece.as_bytes();
    let mut p = 0;
    let skip_ws = |p: &mut usize| {
        while *p < b.len() && b[*p].is_ascii_whitespace() {
            *p += 1;
        }
    };
    skip_ws(&mut p);
    let lead = p;
    if piece[lead..].trim() == "0" {
        return Ok(());
    }
    let mut first = true;
    while p < b.len() {
        skip_ws(&mut p);
        let mut sign = 1.0;
        if p < b.len() && (b[p] == b'+' || b[p] == b'-') {
            if b[p] == b'-' {
                sign = -1.0;
            }
            p += 1;
            skip_ws(&mut p);
        } else if !first {
            return Err(err(offset + p, ParseErrorKind::Malformed));
        }
        first = false;
        let term_start = p;
        let num_end = scan_number(b, p);
        let mut coef = 1.0;
        let mut q = num_end;
        if q < b.len() && b[q] == b'*' {
            coef = piece[p..num_end]
                .parse::<f64>()
                .map_err(|_| err(offset + p, ParseErrorKind::Malformed))?;
            q += 1;
            skip_ws(&mut q);
            p = q;
            if !(p + 2 <= b.len() && b[p].is_ascii_digit() && b[p + 1].is_ascii_digit()) {
                return Err(err(offset + p, ParseErrorKind::Malformed));
            }
        } else if num_end != p + 2 || !b[p].is_ascii_digit() || !b[p + 1].is_ascii_digit() {
            return Err(err(offset + term_start, ParseErrorKind::Malformed));
        }
        let i = (b[p] - b'0') as usize;
        let j = (b[p + 1] - b'0') as usize;
        let at = offset + p;
        if !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) {
            return Err(err(at, ParseErrorKind::IndexOutOfRange));
        }
        if i == j {
            return Err(err(at, ParseErrorKind::RepeatedIndex));
        }
        if i > k || j > k {
            return Err(err(at, ParseErrorKind::NotTriangular));
        }
        let (lo, hi, s) = if i < j { (i, j, sign) } else { (j, i, -sign) };
        entries.push((k, lo - 1, hi - 1, s * coef));
        p += 2;
        skip_ws(&mut p);
    }
    if first {
        return Err(err(offset + lead, ParseErrorKind::Malformed));
    }
    Ok(())
}

/// End of the longest decimal-number prefix starting at `p`.
fn scan_number(b: &[u8], mut p: usize) -> usize {
    let digits = |p: &mut usize| {
        while *p < b.len() && b[*p].is_ascii_digit() {
            *p += 1;
        }
    };
    digits(&mut p);
    if p < b.len() && b[p] == b'.' {
        p += 1;
        digits(&mut p);
    }
    if p < b.len() && (b[p] == b'e' || b[p] == b'E') {
        let mut q = p + 1;
        if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
            q += 1;
        }
        if q < b.len() && b[q].is_ascii_digit() {
            p = q;
            digits(&mut p);
        }
    }
    p
}

pub(crate) fn render_differential(row: &[[f64; DIM]; DIM]) -> String {
    let mut out = String::new();
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let v = row[i][j];
            if v == 0.0 {
                continue;
            }
            let mag = v.abs();
            if v < 0.0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if mag != 1.0 {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("{}{}", i + 1, j + 1));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Builtin, Vector};

    fn e(i: usize) -> Vector {
        Vector::ith(i - 1, 1.0)
    }

    #[test]
    fn heisenberg_sum() {
        let alg = parse_salamon("(0,0,0,0,0,12+34)").unwrap();
        assert_eq!(alg.bracket(&e(1), &e(2)), -e(6));
        assert_eq!(alg.bracket(&e(3), &e(4)), -e(6));
        assert_eq!(alg.nonzero_brackets().len(), 2);
    }

    #[test]
    fn abelian() {
        let alg = parse_salamon("(0,0,0,0,0,0)").unwrap();
        assert!(alg.nonzero_brackets().is_empty());
    }

    #[test]
    fn reversed_pair_flips_sign() {
        let alg = parse_salamon("(0,0,0,0,13+42,14+23)").unwrap();
        assert_eq!(alg.bracket(&e(1), &e(3)), -e(5));
        assert_eq!(alg.bracket(&e(4), &e(2)), -e(5));
        assert_eq!(alg.bracket(&e(1), &e(4)), -e(6));
        assert_eq!(alg.bracket(&e(2), &e(3)), -e(6));
    }

    #[test]
    fn whitespace_and_coefficients() {
        let alg = parse_salamon(" ( 0, 0 ,0,0, 2.5*12 , -13 + 1e-1*24 ) ").unwrap();
        assert_eq!(alg.bracket(&e(1), &e(2)), -2.5 * e(5));
        assert_eq!(alg.bracket(&e(1), &e(3)), e(6));
        assert_eq!(alg.bracket(&e(2), &e(4)), -0.1 * e(6));
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("(0,0,0,0,12)", ParseErrorKind::Arity(5)),
            ("(0,0,0,0,1x,34)", ParseErrorKind::Malformed),
            ("(0,0,0,0,17,34)", ParseErrorKind::IndexOutOfRange),
            ("(0,0,0,0,11,34)", ParseErrorKind::RepeatedIndex),
            ("(0,0,0,0,12,56)", ParseErrorKind::NotTriangular),
            ("(0,0,0,0,12 34,0)", ParseErrorKind::Malformed),
            ("(0,0,0,0,,34)", ParseErrorKind::Malformed),
            ("(0,0,0,0,12,34", ParseErrorKind::Malformed),
        ];
        for (text, kind) in cases {
            let e = parse_salamon(text).unwrap_err();
            assert_eq!(e.kind, kind, "{text}");
        }
        assert_eq!(parse_salamon("(0,0,0,0,17,34)").unwrap_err().position, 9);
        assert_eq!(parse_salamon("(0,0,0,0,12,56)").unwrap_err().position, 12);
    }

    #[test]
    fn builtins_round_trip_exactly() {
        for b in Builtin::ALL {
            let alg = crate::LieAlgebra::builtin(b);
            let back = parse_salamon(&alg.salamon()).unwrap();
            assert_eq!(back, alg.clone().with_label(None), "{b}");
            // generic rendering also round-trips
            let generic = alg.with_label(None);
            assert_eq!(parse_salamon(&generic.salamon()).unwrap(), generic, "{b}");
        }
    }

    #[test]
    fn generic_render_of_fractional_constants() {
        let alg = parse_salamon("(0,0,0,0,0.1*12,-3.25*14+23)").unwrap();
        assert_eq!(alg.salamon(), "(0,0,0,0,0.1*12,-3.25*14+23)");
    }
}
