//! Largest inscribed ball of a region, by linear programming.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::hyperplane::{FloatPlane, Region};
use crate::num::{rational_from_f64, Rational};

/// Slack tolerance used when checking a float center against its region.
pub const EPS_LP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    /// The center as exact rationals (the exact binary value of each float).
    pub fn center_exact(&self) -> Result<Vec<Rational>> {
        self.center.iter().map(|&x| rational_from_f64(x)).collect()
    }

    /// Checks that every constraint holds at the center with slack at least
    /// `r·|a_i| - EPS_LP`, evaluated in floats on unit normals.
    pub fn is_inscribed_in(&self, region: &Region) -> bool {
        let eq = region.equality.as_ref().map(|e| e.to_float());
        region.constraints.iter().all(|c| {
            let fp = c.as_float_le();
            let slack = -fp.signed_distance(&self.center);
            slack >= self.radius * flat_norm(&fp, eq.as_ref()) - EPS_LP
        })
    }

    /// Exact check that the center lies in the region (strictly inside each
    /// half-space, and on the equality flat when present).
    pub fn center_strictly_inside_exact(&self, region: &Region) -> Result<bool> {
        let c = self.center_exact()?;
        Ok(region.constraints.iter().all(|k| num_traits::Signed::is_positive(&k.slack(&c))))
    }
}

/// Norm of the unit normal `a` after projection onto the equality flat.
fn flat_norm(a: &FloatPlane, eq: Option<&FloatPlane>) -> f64 {
    match eq {
        None => 1.0,
        Some(e) => {
            let dot: f64 = a.normal.iter().zip(&e.normal).map(|(x, y)| x * y).sum();
            (1.0 - dot * dot).max(0.0).sqrt()
        }
    }
}

/// Chebyshev center: maximize `r` subject to `a_i · c + r |a_i| <= b_i`,
/// with `c` on the equality flat if one is given and norms measured within
/// that flat.
pub fn chebyshev_center(region: &Region) -> Result<Ball> {
    let d = region
        .constraints
        .first()
        .map(|c| c.plane.dim())
        .or_else(|| region.equality.as_ref().map(|e| e.dim()))
        .ok_or(Error::Unbounded)?;
    let eq = region.equality.as_ref().map(|e| e.to_float());
    let planes: Vec<FloatPlane> = region.constraints.iter().map(|c| c.as_float_le()).collect();
    chebyshev_center_float(d, &planes, eq.as_ref())
}

/// Float-level entry point over `≤`-oriented unit-normal planes.
pub fn chebyshev_center_float(d: usize, planes: &[FloatPlane], eq: Option<&FloatPlane>) -> Result<Ball> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let center: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let radius = lp.add_var(1.0, (0.0, f64::INFINITY));
    for p in planes {
        let mut expr: Vec<_> = center.iter().zip(&p.normal).filter(|(_, &a)| a != 0.0).map(|(&v, &a)| (v, a)).collect();
        let w = flat_norm(p, eq);
        if w > 0.0 {
            expr.push((radius, w));
        }
        if expr.is_empty() {
            if p.offset < -EPS_LP {
                return Err(Error::Infeasible);
            }
            continue;
        }
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, p.offset);
    }
    if let Some(e) = eq {
        let expr: Vec<_> = center.iter().zip(&e.normal).filter(|(_, &a)| a != 0.0).map(|(&v, &a)| (v, a)).collect();
        lp.add_constraint(expr.as_slice(), ComparisonOp::Eq, e.offset);
    }
    let sol = lp.solve().map_err(|e| match e {
        minilp::Error::Infeasible => Error::Infeasible,
        minilp::Error::Unbounded => Error::Unbounded,
    })?;
    let ball = Ball { center: center.iter().map(|&v| sol[v]).collect(), radius: sol[radius] };
    if !ball.radius.is_finite() || ball.center.iter().any(|x| !x.is_finite()) {
        return Err(Error::Unbounded);
    }
    Ok(ball)
}
