//! Vertex-represented polytopes and their plain-text file format.
//!
//! The format is a header line `n d` followed by `n` rows of `d` values. A
//! value is a decimal literal (parsed exactly, so `-0.002` is `-1/500`) or a
//! fraction `p/q`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{parse_rational, primitive_integer_row, rational_from_f64, to_f64, Rational};
use crate::MAX_VERTICES;

/// A finite point set in `R^d`, one row per vertex. Serializes as a matrix
/// of exact rational strings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct Polytope {
    dim: usize,
    rows: Vec<Vec<Rational>>,
}

impl Polytope {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Degenerate("no vertices".into()))?;
        if dim == 0 {
            return Err(Error::Degenerate("dimension 0".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Degenerate(format!(
                "row {i} has {} coordinates, expected {dim}",
                rows[i].len()
            )));
        }
        if rows.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(rows.len()));
        }
        Ok(Polytope { dim, rows })
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| rational_from_f64(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }

    /// Homogenized rows `(1, v)` scaled to primitive integer vectors.
    pub fn homogeneous_integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut h = Vec::with_capacity(self.dim + 1);
                h.push(Rational::one());
                h.extend(r.iter().cloned());
                primitive_integer_row(&h)
            })
            .collect()
    }

    pub fn centroid(&self) -> Vec<Rational> {
        let n = Rational::from_integer(BigInt::from(self.len()));
        (0..self.dim)
            .map(|j| self.rows.iter().map(|r| &r[j]).fold(Rational::zero(), |a, b| a + b) / &n)
            .collect()
    }

    pub fn with_replaced(&self, index: usize, point: Vec<Rational>) -> Self {
        let mut rows = self.rows.clone();
        rows[index] = point;
        Polytope { dim: self.dim, rows }
    }

    pub fn with_added(&self, point: Vec<Rational>) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.push(point);
        Self::new(rows)
    }

    pub fn with_removed(&self, index: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(index);
        Polytope { dim: self.dim, rows }
    }

    pub fn map_rows<F: FnMut(&[Rational]) -> Vec<Rational>>(&self, mut f: F) -> Self {
        Polytope { dim: self.dim, rows: self.rows.iter().map(|r| f(r)).collect() }
    }

    /// Serializes in the text format, writing integers bare and other
    /// values as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.dim);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl From<Polytope> for Vec<Vec<String>> {
    fn from(p: Polytope) -> Self {
        p.rows.iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<String>>> for Polytope {
    type Error = Error;

    fn try_from(rows: Vec<Vec<String>>) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(rows)
    }
}

impl std::fmt::Debug for Polytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polytope({}x{}) ", self.len(), self.dim)?;
        f.debug_list().entries(self.to_f64_rows()).finish()
    }
}

impl FromStr for Polytope {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut head = header.split_whitespace();
        let parse_count = |tok: Option<&str>, what: &str| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse(format!("missing {what} in header")))?
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad {what} in header `{header}`")))
        };
        let n = parse_count(head.next(), "vertex count")?;
        let d = parse_count(head.next(), "dimension")?;
        if head.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in header `{header}`")));
        }
        if n == 0 || d == 0 {
            return Err(Error::Parse("header must have n > 0 and d > 0".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (lineno, line) in lines {
            if rows.len() == n {
                return Err(Error::Parse(format!("line {}: more than {n} rows", lineno + 1)));
            }
            let row = line
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if row.len() != d {
                return Err(Error::Parse(format!(
                    "line {}: expected {d} values, found {}",
                    lineno + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
        }
        Polytope::new(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        let p: Polytope = "3 2\n0 0\n1/2 -0.25\n# comment\n\n1e1 3\n".parse().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.row(1)[1], "-1/4".parse::<Rational>().unwrap());
        assert_eq!(p.row(2)[0], Rational::from_integer(10.into()));
    }

    #[test]
    fn rejects_shape_errors() {
        assert!("2 2\n0 0\n".parse::<Polytope>().is_err());
        assert!("1 2\n0 0 0\n".parse::<Polytope>().is_err());
        assert!("1 2 3\n0 0\n".parse::<Polytope>().is_err());
        assert!("".parse::<Polytope>().is_err());
        assert!("200 2\n".parse::<Polytope>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let p: Polytope = "2 2\n1/3 -2\n0.5 7\n".parse().unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[["1/3","-2"],["1/2","7"]]"#);
        assert_eq!(serde_json::from_str::<Polytope>(&json).unwrap(), p);
        assert!(serde_json::from_str::<Polytope>(r#"[["1"],["1","2"]]"#).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p: Polytope = "2 3\n1/3 -2 0.5\n7 0 -1/9\n".parse().unwrap();
        let q: Polytope = p.to_text().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn homogeneous_rows_are_primitive() {
        let p: Polytope = "1 2\n1/2 3/4\n".parse().unwrap();
        let h = p.homogeneous_integer_rows();
        assert_eq!(h[0], vec![BigInt::from(4), BigInt::from(2), BigInt::from(3)]);
    }
}
