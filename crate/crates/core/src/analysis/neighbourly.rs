use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::hull::Incidence;
use crate::num::binomial;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighbourliness {
    /// Largest `k` such that every set of at most `k` vertices is a face.
    pub k: usize,
    /// Proportion of `(k+1)`-subsets that are faces.
    pub fraction: f64,
}

impl Neighbourliness {
    pub fn score(&self) -> f64 {
        self.k as f64 + self.fraction
    }
}

fn faces_of_size(inc: &Incidence, size: usize) -> (usize, usize) {
    let mut faces = 0;
    let mut total = 0;
    for subset in (0..inc.n).combinations(size) {
        total += 1;
        if inc.is_face(VertexSet::from_indices(subset)) {
            faces += 1;
        }
    }
    (faces, total)
}

pub fn neighbourliness(inc: &Incidence) -> Neighbourliness {
    let mut k = 0;
    while k < inc.n {
        let size = k + 1;
        // Early exit on the first non-face keeps the scan cheap when k is small.
        let all = (0..inc.n).combinations(size).all(|s| inc.is_face(VertexSet::from_indices(s)));
        if !all {
            break;
        }
        k = size;
    }
    let fraction = if k + 1 > inc.n {
        0.0
    } else {
        let (faces, total) = faces_of_size(inc, k + 1);
        debug_assert_eq!(total as u128, binomial(inc.n, k + 1));
        faces as f64 / total as f64
    };
    Neighbourliness { k, fraction }
}
