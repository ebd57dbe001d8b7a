//! Affine hyperplanes `normal · x = offset` in canonical integer form, their
//! oriented half-space versions, and regions cut out by them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::nullspace_line;
use crate::num::{primitive, primitive_integer_row, to_f64, Rational};

/// An affine hyperplane with a primitive integer coefficient vector
/// `(normal, offset)` whose first nonzero normal entry is positive. Equal
/// hyperplanes therefore compare and hash equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
    offset: BigInt,
}

impl Hyperplane {
    /// Canonicalizes an arbitrary nonzero `(normal, offset)` pair.
    pub fn new(normal: Vec<BigInt>, offset: BigInt) -> Result<Self> {
        let lead = normal
            .iter()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::Degenerate("zero normal".into()))?;
        let flip = lead.is_negative();
        let mut all = normal;
        all.push(offset);
        if flip {
            all.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        let mut all = primitive(all);
        let offset = all.pop().expect("nonempty");
        Ok(Hyperplane { normal: all, offset })
    }

    pub fn from_rational(normal: &[Rational], offset: &Rational) -> Result<Self> {
        let mut row = normal.to_vec();
        row.push(offset.clone());
        let mut ints = primitive_integer_row(&row);
        let off = ints.pop().expect("nonempty");
        Self::new(ints, off)
    }

    /// Whether `flip` was needed to canonicalize `(normal, offset)`; i.e. the
    /// canonical plane's `≤` side is the given pair's `≥` side.
    pub fn canonical_flips(normal: &[BigInt]) -> bool {
        normal.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn normal_rational(&self) -> Vec<Rational> {
        self.normal.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }

    /// `normal · x - offset`, exactly.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(-self.offset.clone());
        for (a, v) in self.normal.iter().zip(x) {
            if !a.is_zero() {
                acc += Rational::from_integer(a.clone()) * v;
            }
        }
        acc
    }

    /// `normal · x - offset` on a homogeneous integer row `(w, w·x)`; has the
    /// same sign as [`Self::eval`] when `w > 0`.
    pub fn eval_homogeneous(&self, h: &[BigInt]) -> BigInt {
        let mut acc = -&self.offset * &h[0];
        for (a, v) in self.normal.iter().zip(&h[1..]) {
            acc += a * v;
        }
        acc
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.eval(x).is_zero()
    }

    pub fn is_parallel_to(&self, other: &Hyperplane) -> bool {
        self.normal == other.normal
    }

    pub fn to_float(&self) -> FloatPlane {
        let normal: Vec<f64> = self.normal.iter().map(|x| to_f64(&Rational::from_integer(x.clone()))).collect();
        let offset = to_f64(&Rational::from_integer(self.offset.clone()));
        FloatPlane::new(normal, offset)
    }
}

impl std::fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n: Vec<String> = self.normal.iter().map(ToString::to_string).collect();
        write!(f, "[{}]·x = {}", n.join(", "), self.offset)
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let normal: Vec<String> = self.normal.iter().map(ToString::to_string).collect();
        (normal, self.offset.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let (normal, offset): (Vec<String>, String) = Deserialize::deserialize(d)?;
        let normal = normal
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let offset = offset.parse::<BigInt>().map_err(D::Error::custom)?;
        Hyperplane::new(normal, offset).map_err(D::Error::custom)
    }
}

/// A hyperplane with unit normal in binary64, for distance computations.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPlane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl FloatPlane {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        let norm = if norm > 0.0 { norm } else { 1.0 };
        FloatPlane { normal: normal.iter().map(|x| x / norm).collect(), offset: offset / norm }
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }
}

/// The hyperplane through `points.len() == d` affinely independent points.
pub fn hyperplane_through(points: &[&[Rational]]) -> Result<Hyperplane> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 || points.len() != d || points.iter().any(|p| p.len() != d) {
        return Err(Error::Degenerate(format!("need exactly {d} points of dimension {d}")));
    }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut h = Vec::with_capacity(d + 1);
            h.push(Rational::from_integer(BigInt::from(1)));
            h.extend(p.iter().cloned());
            primitive_integer_row(&h)
        })
        .collect();
    hyperplane_through_homogeneous(&rows.iter().map(Vec::as_slice).collect::<Vec<_>>())
}

/// Same as [`hyperplane_through`] for homogeneous integer rows `(w, w·x)`.
pub fn hyperplane_through_homogeneous(rows: &[&[BigInt]]) -> Result<Hyperplane> {
    let owned: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let y = nullspace_line(&owned).ok_or(Error::AffinelyDependent)?;
    // y0 + y'·x = 0  <=>  y'·x = -y0
    let normal = y[1..].to_vec();
    if normal.iter().all(Zero::is_zero) {
        return Err(Error::AffinelyDependent);
    }
    Hyperplane::new(normal, -y[0].clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Sense {
    pub fn flip(self) -> Sense {
        match self {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
        }
    }
}

/// A closed half-space `plane.normal · x (sense) plane.offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedConstraint {
    pub plane: Hyperplane,
    pub sense: Sense,
}

impl SignedConstraint {
    pub fn new(plane: Hyperplane, sense: Sense) -> Self {
        SignedConstraint { plane, sense }
    }

    /// The constraint in `a · x <= b` form with unit `a`, in floats.
    pub fn as_float_le(&self) -> FloatPlane {
        let fp = self.plane.to_float();
        match self.sense {
            Sense::Le => fp,
            Sense::Ge => FloatPlane {
                normal: fp.normal.iter().map(|x| -x).collect(),
                offset: -fp.offset,
            },
        }
    }

    /// Exact slack `b - a·x` in `≤` orientation; nonnegative iff satisfied.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        let v = self.plane.eval(x);
        match self.sense {
            Sense::Le => -v,
            Sense::Ge => v,
        }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }
}

/// Fast path of [`hyperplane_through_homogeneous`] for machine-integer
/// rows. The nullspace is the vector of signed maximal minors, expanded
/// with checked `i128` arithmetic; `None` on overflow.
pub fn hyperplane_through_small(rows: &[&[i128]]) -> Option<Result<(Hyperplane, FloatPlane)>> {
    let k = rows.len();
    let cols = k + 1;
    if k == 0 || cols > 16 || rows.iter().any(|r| r.len() != cols) {
        return None;
    }
    // minor[mask]: determinant of the last popcount(mask) rows restricted
    // to the columns in mask
    let mut minor = vec![0i128; 1 << cols];
    for j in 0..cols {
        minor[1 << j] = rows[k - 1][j];
    }
    for r in 2..=k {
        let row = rows[k - r];
        for mask in 1usize..1 << cols {
            if mask.count_ones() as usize != r {
                continue;
            }
            let mut acc = 0i128;
            for (pos, j) in (0..cols).filter(|j| mask >> j & 1 == 1).enumerate() {
                let term = row[j].checked_mul(minor[mask & !(1 << j)])?;
                acc = if pos % 2 == 0 { acc.checked_add(term)? } else { acc.checked_sub(term)? };
            }
            minor[mask] = acc;
        }
    }
    let full = (1usize << cols) - 1;
    let mut y = Vec::with_capacity(cols);
    for j in 0..cols {
        let m = minor[full & !(1 << j)];
        y.push(if j % 2 == 0 { m } else { m.checked_neg()? });
    }
    // y0 + y'·x = 0  <=>  y'·x = -y0
    let mut normal = y.split_off(1);
    let mut offset = y[0].checked_neg()?;
    let Some(&lead) = normal.iter().find(|x| **x != 0) else {
        return Some(Err(Error::AffinelyDependent));
    };
    let g = normal.iter().fold(offset, |acc, &x| num_integer::Integer::gcd(&acc, &x));
    let s = if lead < 0 { -g } else { g };
    normal.iter_mut().for_each(|x| *x /= s);
    offset /= s;
    let float = FloatPlane::new(normal.iter().map(|&x| x as f64).collect(), offset as f64);
    let plane = Hyperplane { normal: normal.into_iter().map(BigInt::from).collect(), offset: BigInt::from(offset) };
    Some(Ok((plane, float)))
}

/// An intersection of half-spaces, optionally restricted to a hyperplane.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub constraints: Vec<SignedConstraint>,
    pub equality: Option<Hyperplane>,
}

impl Region {
    pub fn new(constraints: Vec<SignedConstraint>, equality: Option<Hyperplane>) -> Self {
        Region { constraints, equality }
    }

    pub fn contains_exact(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(x))
            && self.equality.as_ref().is_none_or(|e| e.contains(x))
    }
}
