#![allow(dead_code)]

use hopper_core::hull::{proper_spanning_check, Arithmetic};
use hopper_core::num::snap_dyadic;
use hopper_core::polytope::Polytope;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` integer points in `[-range, range]^d`, resampled until they span.
/// Degenerate configurations (coplanar points, non-vertices) are kept.
pub fn integer_cloud(seed: u64, n: usize, d: usize, range: i64) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-range..=range)).collect()).collect();
        let p = Polytope::from_i64_rows(&rows).unwrap();
        if !matches!(proper_spanning_check(&p, Arithmetic::Exact), hopper_core::hull::SpanReport::RankDeficient { .. }) {
            return p;
        }
    }
}

/// `n` dyadic points near the unit sphere in general position: every
/// point is a vertex.
pub fn sphere_points(seed: u64, n: usize, d: usize) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
                v.iter().map(|x| x / norm).collect()
            })
            .collect();
        let exact: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| snap_dyadic(x, 20)).collect()).collect();
        let p = Polytope::new(exact).unwrap();
        if proper_spanning_check(&p, Arithmetic::Exact).is_ok() {
            return p;
        }
    }
}

/// Two decks of `top` and `bottom` points on the unit sphere of the deck
/// planes `x_d = ±1`.
pub fn random_prismatoid(seed: u64, top: usize, bottom: usize, d: usize) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut rows = Vec::new();
        for (count, level) in [(top, 1.0), (bottom, -1.0)] {
            for _ in 0..count {
                let v: Vec<f64> = (0..d - 1).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
                let mut r: Vec<_> = v.iter().map(|x| snap_dyadic(x / norm, 20)).collect();
                r.push(snap_dyadic(level, 0));
                rows.push(r);
            }
        }
        let p = Polytope::new(rows).unwrap();
        if proper_spanning_check(&p, Arithmetic::Exact).is_ok() {
            return p;
        }
    }
}
