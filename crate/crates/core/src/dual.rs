//! Polar duality about the vertex centroid.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{facets_exact, Hull};
use crate::hyperplane::Sense;
use crate::num::Rational;
use crate::polytope::Polytope;

/// Polar dual of `P - centroid(P)`. Row `i` of the result is dual to facet
/// `i` of `P` in canonical facet order, so the dual's vertex-edge graph is
/// `P`'s facet-ridge graph under the identity labelling.
pub fn polar_dual(p: &Polytope) -> Result<Polytope> {
    let hull = facets_exact(p)?;
    polar_dual_with(p, &hull)
}

pub fn polar_dual_with(p: &Polytope, hull: &Hull) -> Result<Polytope> {
    let c = p.centroid();
    let rows = hull
        .facets
        .iter()
        .map(|f| {
            // outward form a·x <= b
            let mut a = f.inequality.plane.normal_rational();
            let mut b = Rational::from_integer(f.inequality.plane.offset().clone());
            if f.inequality.sense == Sense::Ge {
                a.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
            }
            let shift: Rational = a.iter().zip(&c).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t);
            let b = b - shift;
            if !b.is_positive() {
                return Err(Error::Degenerate("centroid not interior".into()));
            }
            Ok(a.into_iter().map(|x| x / &b).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Polytope::new(rows)
}
