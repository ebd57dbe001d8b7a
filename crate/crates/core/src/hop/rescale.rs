use serde::{Deserialize, Serialize};

use crate::analysis::pca::inverse_sqrt;
use crate::error::{Error, Result};
use crate::hull::facets_exact;
use crate::linalg::covariance;
use crate::num::{bits_for_resolution, snap_dyadic};
use crate::polytope::Polytope;
use crate::vset::VertexSet;

/// Which affine normalization keeps the active fitness invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RescaleKind {
    /// Full whitening: zero mean, identity covariance.
    Whiten,
    /// Whitening of the first `d - 1` coordinates; the last coordinate, and
    /// with it the deck planes, is kept exactly.
    Decks,
    /// Centering and one uniform scale, for fitnesses that depend on
    /// directions.
    Similarity,
}

/// Default resolution of the dyadic grid rescaled coordinates are rounded to.
pub const FINE_GRID: f64 = 1e-12;

/// The normalized copy of `p` on the [`FINE_GRID`]. Fails with `Degenerate`
/// when the relevant covariance is singular.
pub fn canonical_rescale(p: &Polytope, kind: RescaleKind) -> Result<Polytope> {
    canonical_rescale_to(p, kind, FINE_GRID)
}

/// The normalized copy of `p`, rounded to a dyadic grid of the given
/// resolution. Coarser grids keep later exact arithmetic small.
pub fn canonical_rescale_to(p: &Polytope, kind: RescaleKind, resolution: f64) -> Result<Polytope> {
    let d = p.dim();
    let points = p.to_f64_rows();
    let free = if kind == RescaleKind::Decks { d - 1 } else { d };
    if free == 0 {
        return Ok(p.clone());
    }
    let head: Vec<Vec<f64>> = points.iter().map(|r| r[..free].to_vec()).collect();
    let (mean, cov) = covariance(&head);
    let map: Vec<Vec<f64>> = match kind {
        RescaleKind::Similarity => {
            let trace: f64 = (0..free).map(|i| cov[i][i]).sum::<f64>() / free as f64;
            if !(trace > 0.0) {
                return Err(Error::Degenerate("zero spread".into()));
            }
            let s = 1.0 / trace.sqrt();
            (0..free).map(|i| (0..free).map(|j| if i == j { s } else { 0.0 }).collect()).collect()
        }
        _ => inverse_sqrt(&cov).ok_or_else(|| Error::Degenerate("singular vertex covariance".into()))?,
    };
    let bits = bits_for_resolution(resolution);
    let rows = p
        .rows()
        .iter()
        .zip(&head)
        .map(|(exact, x)| {
            let centered: Vec<f64> = x.iter().zip(&mean).map(|(a, m)| a - m).collect();
            let mut out: Vec<_> = map
                .iter()
                .map(|row| snap_dyadic(row.iter().zip(&centered).map(|(a, b)| a * b).sum(), bits))
                .collect();
            out.extend(exact[free..].iter().cloned());
            out
        })
        .collect();
    Polytope::new(rows)
}

/// [`canonical_rescale`], falling back to `p` itself when rounding changed
/// the exact facet incidences (given as `signature`).
pub fn rescale_preserving(p: &Polytope, kind: RescaleKind, resolution: f64, signature: &[VertexSet]) -> Polytope {
    match canonical_rescale_to(p, kind, resolution) {
        Ok(q) if facets_exact(&q).is_ok_and(|h| h.incidence.facets == signature) => q,
        _ => p.clone(),
    }
}
