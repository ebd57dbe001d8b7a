//! Relative scale of the two decks: whiten the bottom deck, then read off the
//! principal variances of the top deck.

use serde::{Deserialize, Serialize};

use super::prismatoid::{Deck, Prismatoid};
use crate::error::{Error, Result};
use crate::linalg::{covariance, symmetric_eigen};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleProfile {
    pub eigen_min: f64,
    pub eigen_max: f64,
}

impl ScaleProfile {
    pub fn ratio(&self) -> f64 {
        self.eigen_max / self.eigen_min
    }
}

/// Orthonormal basis of the complement of `normal`.
pub fn complement_basis(normal: &[f64]) -> Vec<Vec<f64>> {
    let d = normal.len();
    let len = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = vec![normal.iter().map(|x| x / len).collect()];
    // Adding unit vectors in order of smallest overlap with the normal keeps
    // Gram-Schmidt well conditioned.
    let mut axes: Vec<usize> = (0..d).collect();
    axes.sort_by(|&a, &b| normal[a].abs().total_cmp(&normal[b].abs()));
    for j in axes {
        let mut v = vec![0.0; d];
        v[j] = 1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// Symmetric inverse square root `C^{-1/2}` of a covariance matrix. `None`
/// when `C` is singular relative to its largest eigenvalue.
pub fn inverse_sqrt(cov: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let (vals, vecs) = symmetric_eigen(cov);
    let top = vals.iter().copied().fold(0.0f64, f64::max);
    if top <= 0.0 || vals.iter().any(|&l| l <= 1e-12 * top) {
        return None;
    }
    let n = cov.len();
    let mut out = vec![vec![0.0; n]; n];
    for (k, l) in vals.iter().enumerate() {
        let s = 1.0 / l.sqrt();
        for i in 0..n {
            for j in 0..n {
                out[i][j] += s * vecs[i][k] * vecs[j][k];
            }
        }
    }
    Some(out)
}

fn project(points: &[Vec<f64>], basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points.iter().map(|p| basis.iter().map(|b| b.iter().zip(p).map(|(x, y)| x * y).sum()).collect()).collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = b[0].len();
    a.iter().map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

pub fn pca_scale_profile(q: &Prismatoid) -> Result<ScaleProfile> {
    let pts = q.polytope.to_f64_rows();
    let normal = q.top_plane.to_float().normal;
    let basis = complement_basis(&normal);
    let deck_points = |deck: Deck| -> Vec<Vec<f64>> { q.deck(deck).iter().map(|i| pts[i].clone()).collect() };
    let bottom = project(&deck_points(Deck::Bottom), &basis);
    let top = project(&deck_points(Deck::Top), &basis);
    let (_, cb) = covariance(&bottom);
    let (_, ct) = covariance(&top);
    let w = inverse_sqrt(&cb).ok_or_else(|| Error::DegenerateDeck("bottom".into()))?;
    if inverse_sqrt(&ct).is_none() {
        return Err(Error::DegenerateDeck("top".into()));
    }
    let m = mat_mul(&mat_mul(&w, &ct), &w);
    let (vals, _) = symmetric_eigen(&m);
    let eigen_min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let eigen_max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScaleProfile { eigen_min, eigen_max })
}
