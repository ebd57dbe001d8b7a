//! Small dense linear algebra: fraction-free integer elimination for the
//! exact path and partial-pivoting routines for the float path.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::num::{primitive, Rational};

/// Row-reduces an integer matrix in place with Bareiss' fraction-free
/// elimination. Returns the pivot columns.
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    bareiss_echelon(&mut m).len()
}

/// The primitive integer generator of a one-dimensional right nullspace,
/// or `None` if the nullspace has a different dimension.
pub fn nullspace_line(rows: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let cols = rows.first()?.len();
    let mut m = rows.to_vec();
    let pivots = bareiss_echelon(&mut m);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::from_integer(BigInt::from(1));
    for (r, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::zero();
        for c in pc + 1..cols {
            if !m[r][c].is_zero() && !x[c].is_zero() {
                acc += Rational::from_integer(m[r][c].clone()) * &x[c];
            }
        }
        x[pc] = -acc / Rational::from_integer(m[r][pc].clone());
    }
    Some(crate::num::primitive_integer_row(&x))
}

/// Exact inverse-free solve of the square system used for initial cones:
/// returns integer columns `y_j` with `rows[i]·y_j = 0` for `i != j` and
/// `rows[j]·y_j > 0`.
pub fn dual_basis(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let others: Vec<Vec<BigInt>> =
            rows.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, r)| r.clone()).collect();
        let mut y = if others.is_empty() {
            vec![BigInt::from(1)]
        } else {
            nullspace_line(&others)?
        };
        let s = crate::num::dot_int(&rows[j], &y);
        if s.is_zero() {
            return None;
        }
        if s.is_negative() {
            y.iter_mut().for_each(|v| *v = -v.clone());
        }
        out.push(primitive(y));
    }
    Some(out)
}

/// Solves `a x = b` for square `a` with partial pivoting. `None` when the
/// matrix is numerically singular relative to `tol`.
pub fn solve_f64(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> =
        a.iter().zip(b).map(|(row, &rhs)| row.iter().copied().chain([rhs]).collect()).collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs())).max(1e-300);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() <= tol * scale {
            return None;
        }
        m.swap(c, p);
        for i in 0..n {
            if i != c {
                let f = m[i][c] / m[c][c];
                if f != 0.0 {
                    for j in c..=n {
                        m[i][j] -= f * m[c][j];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and column eigenvectors (`vecs[i][k]` is entry `i` of
/// eigenvector `k`).
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m = a.to_vec();
    let mut v: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[i][j] * m[i][j])
                .sum();
        let diag: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i][i]).collect(), v)
}

/// Sample covariance (divided by the point count) of the rows.
pub fn covariance(points: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = points.len().max(1) as f64;
    let d = points.first().map_or(0, Vec::len);
    let mean: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for p in points {
        for i in 0..d {
            for j in 0..d {
                cov[i][j] += (p[i] - mean[i]) * (p[j] - mean[j]);
            }
        }
    }
    cov.iter_mut().flatten().for_each(|x| *x /= n);
    (mean, cov)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_plane_rows() {
        // rows (1, x, y) for (1,0,0),(0,1,0) in homogeneous form
        let rows = ints(&[&[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]);
        let y = nullspace_line(&rows).unwrap();
        for r in &rows {
            assert!(crate::num::dot_int(r, &y).is_zero());
        }
        assert_eq!(rank_int(&rows), 3);
    }

    #[test]
    fn dependent_rows_have_no_line() {
        let rows = ints(&[&[1, 0, 0], &[1, 0, 0]]);
        assert!(nullspace_line(&rows).is_none());
    }

    #[test]
    fn dual_basis_is_biorthogonal() {
        let rows = ints(&[&[1, 2, 0], &[1, -1, 3], &[1, 0, -2]]);
        let ys = dual_basis(&rows).unwrap();
        for (j, y) in ys.iter().enumerate() {
            for (i, r) in rows.iter().enumerate() {
                let s = crate::num::dot_int(r, y);
                if i == j {
                    assert!(s.is_positive());
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn jacobi_recovers_diagonal() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (mut ev, _) = symmetric_eigen(&a);
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_small_system() {
        let x = solve_f64(&[vec![2.0, 1.0], vec![1.0, 3.0]], &[3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve_f64(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0], 1e-12).is_none());
    }
}
