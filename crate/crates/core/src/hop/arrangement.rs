use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::hyperplane::{hyperplane_through_homogeneous, hyperplane_through_small, FloatPlane, Hyperplane};
use crate::num::Rational;
use crate::polytope::Polytope;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneEntry {
    /// Sorted `d`-subsets of vertex indices spanning the plane.
    pub generators: Vec<VertexSet>,
    pub float: FloatPlane,
}

/// How the vertex list changed since the cache was last synced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexChange {
    Replaced(usize),
    Added,
    Removed(usize),
}

/// All hyperplanes through `d` affinely independent vertices, deduplicated
/// by canonical form, with the subsets generating each.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrangementCache {
    d: usize,
    rows: Vec<Vec<Rational>>,
    homogeneous: Vec<Vec<BigInt>>,
    /// `homogeneous` as machine integers, when every entry fits.
    small: Option<Vec<Vec<i128>>>,
    planes: BTreeMap<Hyperplane, PlaneEntry>,
}

impl ArrangementCache {
    pub fn build(p: &Polytope) -> Self {
        let mut cache = ArrangementCache {
            d: p.dim(),
            rows: p.rows().to_vec(),
            homogeneous: Vec::new(),
            small: None,
            planes: BTreeMap::new(),
        };
        cache.set_rows(p);
        let all: Vec<usize> = (0..p.len()).collect();
        cache.insert_subsets(&all, None);
        cache
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// Planes in canonical order.
    pub fn planes(&self) -> impl Iterator<Item = (&Hyperplane, &PlaneEntry)> {
        self.planes.iter()
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.planes.contains_key(h)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn set_rows(&mut self, p: &Polytope) {
        self.rows = p.rows().to_vec();
        self.homogeneous = p.homogeneous_integer_rows();
        self.small = self
            .homogeneous
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).ok().map(i128::from)).collect::<Option<Vec<_>>>())
            .collect();
    }

    fn plane_of(&self, set: VertexSet) -> Option<(Hyperplane, FloatPlane)> {
        if let Some(small) = &self.small {
            let rows: Vec<&[i128]> = set.iter().map(|i| small[i].as_slice()).collect();
            if let Some(r) = hyperplane_through_small(&rows) {
                return r.ok();
            }
        }
        let rows: Vec<&[BigInt]> = set.iter().map(|i| self.homogeneous[i].as_slice()).collect();
        let h = hyperplane_through_homogeneous(&rows).ok()?;
        let float = h.to_float();
        Some((h, float))
    }

    /// Adds the plane of every `d`-subset drawn from `pool`, restricted to
    /// subsets containing `required` when given.
    fn insert_subsets(&mut self, pool: &[usize], required: Option<usize>) {
        let k = if required.is_some() { self.d - 1 } else { self.d };
        let others: Vec<usize> = pool.iter().copied().filter(|&i| Some(i) != required).collect();
        for combo in others.into_iter().combinations(k) {
            let set = VertexSet::from_indices(combo.iter().copied().chain(required));
            let Some((h, float)) = self.plane_of(set) else {
                continue;
            };
            match self.planes.get_mut(&h) {
                Some(e) => {
                    let at = e.generators.binary_search(&set).unwrap_or_else(|x| x);
                    e.generators.insert(at, set);
                }
                None => {
                    self.planes.insert(h, PlaneEntry { generators: vec![set], float });
                }
            }
        }
    }

    /// Drops generators selected by `gone`, relabels the rest with `map`, and
    /// removes planes left without generators.
    fn prune(&mut self, gone: impl Fn(VertexSet) -> bool, map: impl Fn(VertexSet) -> VertexSet) {
        self.planes.retain(|_, e| {
            e.generators.retain(|&s| !gone(s));
            e.generators.iter_mut().for_each(|s| *s = map(*s));
            e.generators.sort_unstable();
            !e.generators.is_empty()
        });
    }

    #[cfg(test)]
    pub(crate) fn retain_planes(&mut self, keep: impl Fn(&Hyperplane) -> bool) {
        self.planes.retain(|h, _| keep(h));
    }

    /// Applies one change to match `p`, recomputing only the subsets that
    /// involve the changed vertex.
    pub fn update(&mut self, p: &Polytope, change: VertexChange) {
        let n = p.len();
        self.set_rows(p);
        let all: Vec<usize> = (0..n).collect();
        match change {
            VertexChange::Replaced(i) => {
                self.prune(|s| s.contains(i), |s| s);
                self.insert_subsets(&all, Some(i));
            }
            VertexChange::Added => self.insert_subsets(&all, Some(n - 1)),
            VertexChange::Removed(i) => self.prune(|s| s.contains(i), |s| s.remove_index(i)),
        }
    }

    /// The single change turning the cached vertex list into `p`'s, if any.
    fn diff(&self, p: &Polytope) -> Option<Option<VertexChange>> {
        let (old, new) = (&self.rows, p.rows());
        if p.dim() != self.d {
            return None;
        }
        if old.len() == new.len() {
            let changed: Vec<usize> = (0..old.len()).filter(|&i| old[i] != new[i]).collect();
            return match changed.as_slice() {
                [] => Some(None),
                [i] => Some(Some(VertexChange::Replaced(*i))),
                _ => None,
            };
        }
        if new.len() == old.len() + 1 && new[..old.len()] == old[..] {
            return Some(Some(VertexChange::Added));
        }
        if new.len() + 1 == old.len() {
            let i = (0..new.len()).find(|&i| old[i] != new[i]).unwrap_or(new.len());
            if old[i + 1..] == new[i..] {
                return Some(Some(VertexChange::Removed(i)));
            }
        }
        None
    }

    /// Brings the cache in line with `p`: incrementally after a single
    /// replacement, addition or removal, from scratch otherwise.
    pub fn sync(&mut self, p: &Polytope) {
        match self.diff(p) {
            Some(None) => {}
            Some(Some(change)) => self.update(p, change),
            None => *self = Self::build(p),
        }
    }
}

/// The arrangement of `p`; reuses `cache` when `p` differs from its vertex
/// list in at most one row.
pub fn enumerate_arrangement(p: &Polytope, cache: Option<ArrangementCache>, changed: Option<usize>) -> ArrangementCache {
    match (cache, changed) {
        (Some(mut c), Some(i)) if c.rows.len() == p.len() && c.d == p.dim() && i < p.len() => {
            c.update(p, VertexChange::Replaced(i));
            c
        }
        (Some(mut c), _) => {
            c.sync(p);
            c
        }
        (None, _) => ArrangementCache::build(p),
    }
}
