use serde::{Deserialize, Serialize};

use super::hirsch::hirsch_report;
use super::monotone::{monotone_path_length, TieBreak};
use super::neighbourly::neighbourliness;
use super::pca::{pca_scale_profile, ScaleProfile};
use super::prismatoid::{detect_prismatoid_with, DeckGraph};
use super::width::{average_width, defect, width, DefectConvention, WidthHeuristic};
use crate::error::{Error, Result};
use crate::hull::{facets_exact, proper_spanning_check, Arithmetic, SpanReport};
use crate::num::Rational;
use crate::polytope::Polytope;

/// Everything `verify` computes about a polytope, all in exact arithmetic
/// apart from the PCA profile and the average width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub n: usize,
    pub d: usize,
    pub facets: usize,
    pub is_prismatoid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deck_sizes: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_width: Option<f64>,
    pub diameter: usize,
    pub dual_diameter: usize,
    pub hirsch_gap: i64,
    pub dual_hirsch_gap: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_excess: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implied_dimension: Option<usize>,
    pub neighbourly_k: usize,
    pub neighbourly_fraction: f64,
    /// Longest path along which the first coordinate increases; absent when
    /// two vertices tie.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale_profile: Option<ScaleProfile>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub defect_convention: DefectConvention,
    /// Skip neighbourliness (combinatorial in `n`).
    pub skip_neighbourliness: bool,
}

pub fn verify_polytope(p: &Polytope, opts: &VerifyOptions) -> Result<VerificationReport> {
    match proper_spanning_check(p, Arithmetic::Exact) {
        SpanReport::Ok => {}
        SpanReport::Redundant(rows) => return Err(Error::Degenerate(format!("rows {rows:?} are not vertices"))),
        SpanReport::RankDeficient { rank, dim } => {
            return Err(Error::Degenerate(format!("affine rank {rank} below dimension {dim}")))
        }
    }
    let hull = facets_exact(p)?;
    let q = match detect_prismatoid_with(p, &hull) {
        Ok(q) => Some(q),
        Err(Error::NotPrismatoid) => None,
        Err(e) => return Err(e),
    };
    let hirsch = hirsch_report(p, &hull, q.as_ref())?;
    let (mut w, mut def, mut avg, mut scale) = (None, None, None, None);
    if let Some(q) = &q {
        let g = DeckGraph::new(&hull.incidence, q.top, q.bottom)?;
        w = Some(width(&g)?);
        def = Some(defect(&g, opts.defect_convention)?);
        avg = Some(average_width(&g, &WidthHeuristic::AVERAGE_WIDTH)?);
        scale = pca_scale_profile(q).ok();
    }
    let nb = if opts.skip_neighbourliness { None } else { Some(neighbourliness(&hull.incidence)) };
    let mut functional = vec![Rational::from_integer(0.into()); p.dim()];
    functional[0] = Rational::from_integer(1.into());
    let monotone = match monotone_path_length(p, &functional, TieBreak::Error) {
        Ok(m) => Some(m),
        Err(Error::NonGenericFunctional(..)) => None,
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        n: p.len(),
        d: p.dim(),
        facets: hirsch.facets,
        is_prismatoid: q.is_some(),
        deck_sizes: q.as_ref().map(|q| (q.top.len(), q.bottom.len())),
        width: w,
        defect: def,
        average_width: avg,
        diameter: hirsch.diameter,
        dual_diameter: hirsch.dual_diameter,
        hirsch_gap: hirsch.gap,
        dual_hirsch_gap: hirsch.dual_gap,
        width_excess: hirsch.width_excess,
        implied_dimension: hirsch.implied_dimension,
        neighbourly_k: nb.map_or(0, |n| n.k),
        neighbourly_fraction: nb.map_or(0.0, |n| n.fraction),
        monotone_length: monotone,
        scale_profile: scale,
    })
}
