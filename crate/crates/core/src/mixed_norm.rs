//! Finite mixed-norm sequence spaces `L_p^{N1}(L_u^{N2})`.
//!
//! All norms are taken with respect to the normalized counting measure, so
//! for `p < inf`
//!
//! ```text
//! ||x||_p = ((1/N) * sum_i |x_i|^p)^(1/p),     ||x||_inf = max_i |x_i|
//! ```
//!
//! and the mixed norm of an `N1 x N2` matrix is the outer `L_p` norm of the
//! vector of inner `L_u` row norms.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponents at or above this value are evaluated with max-rescaling.
const RESCALE_FROM: f64 = 8.0;

/// An exponent in `[1, inf]`, stored by its reciprocal (`0` encodes `inf`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent {
    reciprocal: f64,
}

impl Exponent {
    pub const ONE: Exponent = Exponent { reciprocal: 1.0 };
    pub const TWO: Exponent = Exponent { reciprocal: 0.5 };
    pub const INFINITY: Exponent = Exponent { reciprocal: 0.0 };

    /// Builds an exponent from its value; `f64::INFINITY` is accepted.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::invalid(format!("exponent must lie in [1, inf], got {value}")));
        }
        Ok(Exponent { reciprocal: 1.0 / value })
    }

    pub fn from_reciprocal(reciprocal: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reciprocal) {
            return Err(Error::invalid(format!(
                "exponent reciprocal must lie in [0, 1], got {reciprocal}"
            )));
        }
        Ok(Exponent { reciprocal })
    }

    #[inline]
    pub fn reciprocal(self) -> f64 {
        self.reciprocal
    }

    #[inline]
    pub fn value(self) -> f64 {
        if self.reciprocal == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.reciprocal
        }
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.reciprocal == 0.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.value())
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::INFINITY),
            other => {
                let value: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an exponent: {s:?}")))?;
                Exponent::new(value)
            }
        }
    }
}

// Finite exponents serialize as numbers, infinity as the string "inf".
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.value())
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

/// A dense real `n1 x n2` matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n1: usize,
    n2: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        assert!(n1 > 0 && n2 > 0, "matrix dimensions must be positive");
        Matrix { n1, n2, entries: vec![0.0; n1 * n2] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n1 = rows.len();
        let n2 = rows.first().map_or(0, Vec::len);
        if n1 == 0 || n2 == 0 {
            return Err(Error::invalid("matrix must have at least one row and one column"));
        }
        if rows.iter().any(|r| r.len() != n2) {
            return Err(Error::invalid("ragged rows"));
        }
        Matrix::from_vec(n1, n2, rows.concat())
    }

    pub fn from_vec(n1: usize, n2: usize, entries: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if entries.len() != n1 * n2 {
            return Err(Error::invalid(format!(
                "expected {} entries for a {n1}x{n2} matrix, got {}",
                n1 * n2,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("non-finite entry {bad}")));
        }
        Ok(Matrix { n1, n2, entries })
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n2 + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.entries[row * self.n2 + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.n2..(row + 1) * self.n2]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.entries[row * self.n2..(row + 1) * self.n2]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.n2)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_zero_row(&self, row: usize) -> bool {
        self.row(row).iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, alpha: f64) -> Matrix {
        self.map(|x| alpha * x)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { n1: self.n1, n2: self.n2, entries: self.entries.iter().map(|&x| f(x)).collect() }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!((self.n1, self.n2), (other.n1, other.n2), "matrix shapes differ");
        Matrix {
            n1: self.n1,
            n2: self.n2,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    /// Parses the text format: a header line `N1 N2` followed by `N1` lines of
    /// `N2` whitespace-separated reals.
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let [n1, n2] = dims[..] else {
            return Err(Error::Parse(format!("header must be \"N1 N2\", got {header:?}")));
        };
        let mut entries = Vec::with_capacity(n1 * n2);
        for (i, line) in lines.enumerate() {
            if i >= n1 {
                return Err(Error::Parse(format!("more than {n1} rows")));
            }
            let before = entries.len();
            for tok in line.split_whitespace() {
                let x: f64 = tok.parse().map_err(|_| Error::Parse(format!("bad entry {tok:?}")))?;
                entries.push(x);
            }
            if entries.len() - before != n2 {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n2}", i + 1, entries.len() - before)));
            }
        }
        Matrix::from_vec(n1, n2, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n1, self.n2);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Source space `L_p^{N1}(L_u^{N2})` and target space `L_q^{N1}(L_v^{N2})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacePair {
    pub n1: usize,
    pub n2: usize,
    pub p: Exponent,
    pub u: Exponent,
    pub q: Exponent,
    pub v: Exponent,
}

impl SpacePair {
    pub fn new(n1: usize, n2: usize, p: Exponent, u: Exponent, q: Exponent, v: Exponent) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::invalid("space dimensions must be positive"));
        }
        Ok(SpacePair { n1, n2, p, u, q, v })
    }

    pub fn grid_size(&self) -> usize {
        self.n1 * self.n2
    }

    /// `p < q` and `u > v`: the only case where sampling beats the zero algorithm.
    pub fn is_adaptive_regime(&self) -> bool {
        self.p.reciprocal() > self.q.reciprocal() && self.u.reciprocal() < self.v.reciprocal()
    }

    pub fn source_norm(&self, f: &Matrix) -> f64 {
        mixed_norm(f, self.p, self.u)
    }

    pub fn target_norm(&self, f: &Matrix) -> f64 {
        mixed_norm(f, self.q, self.v)
    }
}

/// Normalized `L_u^{N}` norm of a vector.
pub fn inner_norm(row: &[f64], u: Exponent) -> f64 {
    assert!(!row.is_empty(), "norm of an empty vector");
    normalized_norm(row.iter().copied(), row.len(), u)
}

fn normalized_norm(xs: impl Iterator<Item = f64> + Clone, len: usize, e: Exponent) -> f64 {
    let n = len as f64;
    if e.is_infinite() {
        return xs.fold(0.0, |m, x| m.max(x.abs()));
    }
    let r = e.reciprocal();
    if r == 1.0 {
        return xs.map(f64::abs).sum::<f64>() / n;
    }
    if r == 0.5 {
        return (xs.map(|x| x * x).sum::<f64>() / n).sqrt();
    }
    let power = e.value();
    if power >= RESCALE_FROM {
        let scale = xs.clone().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mean = xs.map(|x| (x.abs() / scale).powf(power)).sum::<f64>() / n;
        return scale * mean.powf(r);
    }
    (xs.map(|x| x.abs().powf(power)).sum::<f64>() / n).powf(r)
}

/// `||f||_{L_p^{N1}(L_u^{N2})}`.
pub fn mixed_norm(f: &Matrix, p: Exponent, u: Exponent) -> f64 {
    let inner: Vec<f64> = f.rows().map(|row| inner_norm(row, u)).collect();
    inner_norm(&inner, p)
}

/// Operator norm of the identity `L_p(L_u) -> L_q(L_v)`:
/// `N1^{(1/p-1/q)+} * N2^{(1/u-1/v)+}`.
pub fn embedding_norm(sp: &SpacePair) -> f64 {
    let outer = (sp.p.reciprocal() - sp.q.reciprocal()).max(0.0);
    let inner = (sp.u.reciprocal() - sp.v.reciprocal()).max(0.0);
    (sp.n1 as f64).powf(outer) * (sp.n2 as f64).powf(inner)
}
