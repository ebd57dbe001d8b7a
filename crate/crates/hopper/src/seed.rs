//! Random starting polytopes.

use hopper_core::analysis::prismatoid::decks_by_last_coordinate;
use hopper_core::hull::{facets_exact, proper_spanning_check, Arithmetic, SpanReport};
use hopper_core::num::{snap_dyadic, Rational};
use hopper_core::objectives::Scenario;
use hopper_core::polytope::Polytope;
use rand::Rng;

use crate::config::RunConfig;
use crate::error::{HopperError, Result};

/// Rejections allowed before seeding gives up.
pub const MAX_SEED_ATTEMPTS: usize = 1000;

/// Seed coordinates are rounded to multiples of `2^-SEED_BITS`.
pub const SEED_BITS: u32 = 20;

/// A uniformly random unit vector in `R^k`, by rejection from the cube.
fn unit_vector<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn sphere_row<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<Rational> {
    unit_vector(k, rng).into_iter().map(|x| snap_dyadic(x, SEED_BITS)).collect()
}

fn candidate<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> Result<Polytope> {
    let d = cfg.d;
    let rows = match (cfg.scenario, cfg.decks) {
        (Scenario::Hirsch, Some([top, bottom])) => {
            let mut rows = Vec::with_capacity(top + bottom);
            for (count, level) in [(top, 1), (bottom, -1)] {
                for _ in 0..count {
                    let mut r = sphere_row(d - 1, rng);
                    r.push(Rational::from_integer(level.into()));
                    rows.push(r);
                }
            }
            rows
        }
        _ => (0..cfg.seed_vertices()).map(|_| sphere_row(d, rng)).collect(),
    };
    Ok(Polytope::new(rows)?)
}

fn valid(cfg: &RunConfig, p: &Polytope) -> bool {
    if proper_spanning_check(p, Arithmetic::Exact) != SpanReport::Ok {
        return false;
    }
    if cfg.scenario != Scenario::Hirsch {
        return true;
    }
    let (top, bottom) = decks_by_last_coordinate(p);
    facets_exact(p).is_ok_and(|h| h.incidence.position(top).is_some() && h.incidence.position(bottom).is_some())
}

/// Points on the unit sphere (two deck spheres at `x_d = ±1` for
/// prismatoids), resampled until every point is a vertex of a
/// full-dimensional hull and, for prismatoids, both decks are facets.
pub fn random_seed_polytope<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> Result<Polytope> {
    random_seed_with(cfg, rng, |_| true)
}

/// [`random_seed_polytope`] with an extra acceptance test, e.g. that the
/// seed can be evaluated.
pub fn random_seed_with<R, F>(cfg: &RunConfig, rng: &mut R, mut accept: F) -> Result<Polytope>
where
    R: Rng + ?Sized,
    F: FnMut(&Polytope) -> bool,
{
    for _ in 0..MAX_SEED_ATTEMPTS {
        let p = candidate(cfg, rng)?;
        if valid(cfg, &p) && accept(&p) {
            return Ok(p);
        }
    }
    Err(HopperError::SeedingFailed(MAX_SEED_ATTEMPTS))
}
