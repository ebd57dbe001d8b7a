use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::Rng;

use super::{ArrangementCache, GuardConfig};
use crate::analysis::prismatoid::Deck;
use crate::chebyshev::chebyshev_center_float;
use crate::error::{Error, Result};
use crate::hyperplane::{FloatPlane, Hyperplane, Region, Sense, SignedConstraint};
use crate::linalg::solve_f64;
use crate::num::{bits_for_resolution, snap_dyadic, Rational};
use crate::policy::PlaneDistribution;

/// The deck plane a prismatoid hop is confined to.
#[derive(Clone, Debug, PartialEq)]
pub struct DeckFlat {
    pub deck: Deck,
    pub plane: Hyperplane,
}

impl DeckFlat {
    /// The plane `x_d = value`.
    pub fn at_last_coordinate(deck: Deck, d: usize, value: &Rational) -> Result<Self> {
        let mut normal = vec![Rational::zero(); d];
        normal[d - 1] = Rational::from_integer(1.into());
        Ok(DeckFlat { deck, plane: Hyperplane::from_rational(&normal, value)? })
    }
}

/// A cell of the arrangement with an inscribed ball far from every
/// arrangement plane, and the exact point a vertex will hop to.
#[derive(Clone, Debug)]
pub struct HopProposal {
    /// Dyadic rounding of the ball center, on the deck plane when there is
    /// one and strictly inside the region.
    pub target: Vec<Rational>,
    pub center: Vec<f64>,
    pub radius: f64,
    pub region: Region,
    pub deck: Option<Deck>,
    /// Refinement rounds after the initial simplex.
    pub refinements: usize,
}

impl HopProposal {
    pub fn boundary(&self) -> impl Iterator<Item = &Hyperplane> {
        self.region.constraints.iter().map(|c| &c.plane)
    }
}

/// Result of [`construct_hop_target`] plus the simplices discarded by
/// guard checks along the way.
#[derive(Debug)]
pub struct TargetAttempt {
    pub proposal: Result<HopProposal>,
    pub guard_rejected: Vec<Vec<Hyperplane>>,
}

/// Norm of a unit normal after projection onto the flat.
fn flat_norm(a: &[f64], eq: Option<&FloatPlane>) -> f64 {
    match eq {
        None => 1.0,
        Some(e) => {
            let dot: f64 = a.iter().zip(&e.normal).map(|(x, y)| x * y).sum();
            (1.0 - dot * dot).max(0.0).sqrt()
        }
    }
}

/// Distance from `c` to the plane measured within the flat.
fn flat_distance(p: &FloatPlane, c: &[f64], eq: Option<&FloatPlane>) -> f64 {
    p.signed_distance(c).abs() / flat_norm(&p.normal, eq)
}

fn le_form(plane: &FloatPlane, sense: Sense) -> FloatPlane {
    match sense {
        Sense::Le => plane.clone(),
        Sense::Ge => FloatPlane { normal: plane.normal.iter().map(|x| -x).collect(), offset: -plane.offset },
    }
}

/// Draws `k` distinct indices with probability proportional to `weights`,
/// switching to uniform over the remaining eligible indices once the
/// remaining mass is zero.
fn sample_without_replacement<R: Rng + ?Sized>(weights: &[f64], eligible: &[bool], k: usize, rng: &mut R) -> Vec<usize> {
    let mut taken = vec![false; weights.len()];
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let open = |i: usize| eligible[i] && !taken[i];
        let total: f64 = (0..weights.len()).filter(|&i| open(i)).map(|i| weights[i]).sum();
        let pick = if total > 0.0 {
            let mut x = rng.gen::<f64>() * total;
            let mut pick = None;
            for i in (0..weights.len()).filter(|&i| open(i) && weights[i] > 0.0) {
                pick = Some(i);
                if x < weights[i] {
                    break;
                }
                x -= weights[i];
            }
            pick
        } else {
            let free: Vec<usize> = (0..weights.len()).filter(|&i| open(i)).collect();
            (!free.is_empty()).then(|| free[rng.gen_range(0..free.len())])
        };
        match pick {
            Some(i) => {
                taken[i] = true;
                out.push(i);
            }
            None => break,
        }
    }
    out
}

enum Simplex {
    Ok(Vec<SignedConstraint>),
    Singular,
    Guard,
}

/// Orients `m + 1` planes in an `m`-dimensional flat so that they bound the
/// simplex whose vertices are the intersections of every `m` of them.
fn orient_simplex(planes: &[(&Hyperplane, &FloatPlane)], eq: Option<&FloatPlane>, d: usize, guards: &GuardConfig) -> Simplex {
    let mut out = Vec::with_capacity(planes.len());
    for i in 0..planes.len() {
        let mut a: Vec<Vec<f64>> = Vec::with_capacity(d);
        let mut b: Vec<f64> = Vec::with_capacity(d);
        for (j, (_, fp)) in planes.iter().enumerate() {
            if j != i {
                a.push(fp.normal.clone());
                b.push(fp.offset);
            }
        }
        if let Some(e) = eq {
            a.push(e.normal.clone());
            b.push(e.offset);
        }
        let Some(v) = solve_f64(&a, &b, 1e-10) else {
            return Simplex::Singular;
        };
        if v.iter().any(|x| !(x.abs() <= guards.max_abs_coordinate)) {
            return Simplex::Guard;
        }
        let s = planes[i].1.signed_distance(&v);
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if s.abs() <= 1e-9 * scale {
            return Simplex::Singular;
        }
        let sense = if s < 0.0 { Sense::Le } else { Sense::Ge };
        out.push(SignedConstraint::new(planes[i].0.clone(), sense));
    }
    Simplex::Ok(out)
}

/// Exact point on `eq` closest in the coordinate with the largest normal
/// entry: that coordinate is solved for, the others are kept.
fn project_onto(x: &mut [Rational], eq: &Hyperplane) {
    let j = (0..eq.dim()).max_by(|&a, &b| eq.normal()[a].abs().cmp(&eq.normal()[b].abs())).expect("nonzero normal");
    let aj = Rational::from_integer(eq.normal()[j].clone());
    let mut rest = Rational::from_integer(eq.offset().clone());
    for (i, (a, v)) in eq.normal().iter().zip(x.iter()).enumerate() {
        if i != j && !a.is_zero() {
            rest -= Rational::from_integer(a.clone()) * v;
        }
    }
    x[j] = rest / aj;
}

fn snap_target(center: &[f64], radius: f64, region: &Region) -> Option<Vec<Rational>> {
    let bits = bits_for_resolution(radius / 1000.0);
    let mut x: Vec<Rational> = center.iter().map(|&v| snap_dyadic(v, bits)).collect();
    if let Some(eq) = &region.equality {
        project_onto(&mut x, eq);
    }
    region.constraints.iter().all(|c| c.slack(&x).is_positive()).then_some(x)
}

/// Builds a hop proposal: samples a bounded simplex of arrangement planes
/// according to `dist`, then keeps adding the closest plane that comes
/// within `refinement_factor·r` of the inscribed ball's center until none
/// does.
pub fn construct_hop_target<R: Rng + ?Sized>(
    cache: &ArrangementCache,
    dist: &PlaneDistribution,
    deck: Option<&DeckFlat>,
    guards: &GuardConfig,
    deadline: Instant,
    rng: &mut R,
) -> TargetAttempt {
    let mut guard_rejected = Vec::new();
    let proposal = build(cache, dist, deck, guards, deadline, rng, &mut guard_rejected);
    TargetAttempt { proposal, guard_rejected }
}

fn build<R: Rng + ?Sized>(
    cache: &ArrangementCache,
    dist: &PlaneDistribution,
    deck: Option<&DeckFlat>,
    guards: &GuardConfig,
    deadline: Instant,
    rng: &mut R,
    guard_rejected: &mut Vec<Vec<Hyperplane>>,
) -> Result<HopProposal> {
    let d = cache.dim();
    let planes: Vec<(&Hyperplane, &FloatPlane)> = cache.planes().map(|(h, e)| (h, &e.float)).collect();
    if dist.len() != planes.len() {
        return Err(Error::Degenerate(format!("{} probabilities for {} planes", dist.len(), planes.len())));
    }
    let eq_float = deck.map(|f| f.plane.to_float());
    let eq = eq_float.as_ref();
    // planes parallel to the flat never cut it
    let eligible: Vec<bool> = planes.iter().map(|(_, fp)| flat_norm(&fp.normal, eq) > 1e-9).collect();
    let k = if deck.is_some() { d } else { d + 1 };
    if eligible.iter().filter(|&&e| e).count() < k {
        return Err(Error::NoRegionFound(0));
    }
    let weights: Vec<f64> = dist.probs.iter().zip(&eligible).map(|(&p, &e)| if e { p.max(0.0) } else { 0.0 }).collect();
    let equality = deck.map(|f| f.plane.clone());

    for attempt in 1..=guards.max_while_iterations {
        if Instant::now() > deadline {
            return Err(Error::FuseTripped("timeout while sampling a region".into()));
        }
        let picked = sample_without_replacement(&weights, &eligible, k, rng);
        if picked.len() < k {
            return Err(Error::NoRegionFound(attempt));
        }
        let chosen: Vec<(&Hyperplane, &FloatPlane)> = picked.iter().map(|&i| planes[i]).collect();
        let mut constraints = match orient_simplex(&chosen, eq, d, guards) {
            Simplex::Ok(c) => c,
            Simplex::Singular => continue,
            Simplex::Guard => {
                guard_rejected.push(chosen.iter().map(|(h, _)| (*h).clone()).collect());
                continue;
            }
        };
        let mut le: Vec<FloatPlane> =
            constraints.iter().zip(&chosen).map(|(c, (_, fp))| le_form(fp, c.sense)).collect();
        let mut in_region: Vec<bool> = vec![false; planes.len()];
        picked.iter().for_each(|&i| in_region[i] = true);

        let mut refinements = 0;
        let ball = loop {
            let ball = match chebyshev_center_float(d, &le, eq) {
                Ok(b) if b.radius > 0.0 => b,
                _ => break None,
            };
            let limit = guards.refinement_factor * ball.radius;
            let closest = planes
                .iter()
                .enumerate()
                .filter(|(i, _)| eligible[*i] && !in_region[*i])
                .map(|(i, (_, fp))| (i, flat_distance(fp, &ball.center, eq)))
                .filter(|&(_, dist)| dist < limit)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((i, _)) = closest else {
                break Some(ball);
            };
            refinements += 1;
            if refinements > guards.max_while_iterations {
                return Err(Error::FuseTripped(format!("refinement exceeded {} rounds", guards.max_while_iterations)));
            }
            if Instant::now() > deadline {
                return Err(Error::FuseTripped("timeout while refining a region".into()));
            }
            let (h, fp) = planes[i];
            let sense = if fp.signed_distance(&ball.center) <= 0.0 { Sense::Le } else { Sense::Ge };
            constraints.push(SignedConstraint::new(h.clone(), sense));
            le.push(le_form(fp, sense));
            in_region[i] = true;
        };
        let Some(ball) = ball else { continue };
        let region = Region::new(constraints, equality.clone());
        let Some(target) = snap_target(&ball.center, ball.radius, &region) else {
            continue;
        };
        return Ok(HopProposal {
            target,
            center: ball.center,
            radius: ball.radius,
            region,
            deck: deck.map(|f| f.deck),
            refinements,
        });
    }
    Err(Error::NoRegionFound(guards.max_while_iterations))
}

/// Smallest distance, within the flat, from the proposal center to any
/// arrangement plane that cuts the flat.
pub fn min_plane_distance(cache: &ArrangementCache, proposal: &HopProposal) -> f64 {
    let eq = proposal.region.equality.as_ref().map(Hyperplane::to_float);
    cache
        .planes()
        .filter(|(_, e)| flat_norm(&e.float.normal, eq.as_ref()) > 1e-9)
        .map(|(_, e)| flat_distance(&e.float, &proposal.center, eq.as_ref()))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::polytope::Polytope;
    use crate::shapes;

    fn far_deadline() -> Instant {
        Instant::now() + std::time::Duration::from_secs(60)
    }

    fn propose(p: &Polytope, seed: u64) -> (ArrangementCache, Result<HopProposal>) {
        let cache = ArrangementCache::build(p);
        let dist = PlaneDistribution::uniform(cache.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let att = construct_hop_target(&cache, &dist, None, &GuardConfig::default(), far_deadline(), &mut rng);
        (cache, att.proposal)
    }

    #[test]
    fn unit_square_proposal_keeps_its_distance() {
        let p = Polytope::from_i64_rows(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let (cache, prop) = propose(&p, 7);
        let prop = prop.unwrap();
        assert_eq!(cache.len(), 6);
        assert!(min_plane_distance(&cache, &prop) >= 0.8 * prop.radius);
        assert!(prop.region.contains_exact(&prop.target));
    }

    #[test]
    fn parallel_lines_bound_nothing() {
        // the vertex list spans two parallel lines only when d = 2 and the
        // arrangement is built from the two-point sets {0,1} and {2,3}
        let p = Polytope::from_i64_rows(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let mut cache = ArrangementCache::build(&p);
        let keep: Vec<Hyperplane> = cache
            .planes()
            .filter(|(h, _)| h.normal()[0].is_zero())
            .map(|(h, _)| h.clone())
            .collect();
        assert_eq!(keep.len(), 2);
        cache.retain_planes(|h| keep.contains(h));
        let dist = PlaneDistribution::uniform(cache.len());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let att = construct_hop_target(&cache, &dist, None, &GuardConfig::default(), far_deadline(), &mut rng);
        assert!(matches!(att.proposal, Err(Error::NoRegionFound(_))));
    }

    /// Vertices of a 2D region: feasible pairwise intersections.
    fn region_vertices(region: &Region) -> Vec<Vec<f64>> {
        let le: Vec<FloatPlane> = region.constraints.iter().map(|c| c.as_float_le()).collect();
        let mut out = Vec::new();
        for i in 0..le.len() {
            for j in i + 1..le.len() {
                let a = vec![le[i].normal.clone(), le[j].normal.clone()];
                if let Some(v) = solve_f64(&a, &[le[i].offset, le[j].offset], 1e-12) {
                    if le.iter().all(|p| p.signed_distance(&v) <= 1e-9) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn triangle_regions_are_single_cells() {
        let p = shapes::simplex(2);
        let cache = ArrangementCache::build(&p);
        let dist = PlaneDistribution::uniform(cache.len());
        let mut found = 0;
        for seed in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let att = construct_hop_target(&cache, &dist, None, &GuardConfig::default(), far_deadline(), &mut rng);
            let Ok(prop) = att.proposal else { continue };
            found += 1;
            let verts = region_vertices(&prop.region);
            assert!(verts.len() >= 3);
            for (_, e) in cache.planes() {
                let sides: Vec<f64> = verts.iter().map(|v| e.float.signed_distance(v)).collect();
                let crosses = sides.iter().any(|&s| s > 1e-9) && sides.iter().any(|&s| s < -1e-9);
                assert!(!crosses, "seed {seed}: a line cuts the region");
            }
        }
        assert_eq!(found, 1000);
    }

    #[test]
    fn deck_targets_lie_on_the_deck() {
        let p = shapes::triangular_prism();
        let cache = ArrangementCache::build(&p);
        let dist = PlaneDistribution::uniform(cache.len());
        let flat = DeckFlat::at_last_coordinate(Deck::Top, 3, &Rational::from_integer(1.into())).unwrap();
        let mut ok = 0;
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let att = construct_hop_target(&cache, &dist, Some(&flat), &GuardConfig::default(), far_deadline(), &mut rng);
            if let Ok(prop) = att.proposal {
                ok += 1;
                assert!(flat.plane.contains(&prop.target));
                assert!(prop.region.contains_exact(&prop.target));
                assert!(min_plane_distance(&cache, &prop) >= 0.8 * prop.radius - 1e-12);
            }
        }
        assert!(ok > 0);
    }

    #[test]
    fn weighted_sampling_respects_zero_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let s = sample_without_replacement(&[0.0, 1.0, 0.0, 1.0], &[true; 4], 2, &mut rng);
            let mut s2 = s.clone();
            s2.sort();
            assert_eq!(s2, vec![1, 3]);
        }
        let s = sample_without_replacement(&[0.0, 1.0, 0.0, 0.0], &[true, true, false, true], 3, &mut rng);
        assert_eq!(s.len(), 3);
        assert!(!s.contains(&2));
    }
}
