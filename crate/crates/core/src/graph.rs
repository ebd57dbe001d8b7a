//! Undirected graphs over polytope faces: facet-ridge and vertex-edge graphs,
//! BFS distances, diameters and shortest-path counting.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::hull::Incidence;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(nodes: usize) -> Self {
        Graph { adj: vec![Vec::new(); nodes] }
    }

    pub fn from_edges(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(nodes);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g.normalize();
        g
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].push(b);
            self.adj[b].push(a);
        }
    }

    fn normalize(&mut self) {
        for l in &mut self.adj {
            l.sort_unstable();
            l.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// BFS distances from `src`; `None` for unreachable nodes.
    pub fn distances(&self, src: usize) -> Vec<Option<usize>> {
        self.multi_source_distances(&[src])
    }

    pub fn multi_source_distances(&self, srcs: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &s in srcs {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have a distance");
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances(a)[b]
    }

    /// Distance from `src` together with the number of distinct shortest
    /// paths, by the BFS path-counting recurrence.
    pub fn shortest_path_counts(&self, src: usize) -> (Vec<Option<usize>>, Vec<u128>) {
        let mut dist = vec![None; self.len()];
        let mut count = vec![0u128; self.len()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        count[src] = 1;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued");
            for &v in &self.adj[u] {
                match dist[v] {
                    None => {
                        dist[v] = Some(du + 1);
                        count[v] = count[u];
                        queue.push_back(v);
                    }
                    Some(dv) if dv == du + 1 => count[v] = count[v].saturating_add(count[u]),
                    _ => {}
                }
            }
        }
        (dist, count)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances(0).iter().all(Option::is_some)
    }

    /// Maximum shortest-path distance over all node pairs.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for s in 0..self.len() {
            for d in self.distances(s) {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }
}

/// Facet-ridge graph: two facets are adjacent iff their intersection is a
/// ridge. A ridge of facet `F` is an inclusion-maximal set among the
/// intersections `F ∩ G`, `G != F`, with at least `d - 1` vertices.
pub fn facet_ridge_graph(inc: &Incidence) -> Graph {
    let m = inc.facets.len();
    let mut g = Graph::new(m);
    let need = inc.d.saturating_sub(1);
    for i in 0..m {
        let f = inc.facets[i];
        let cands: Vec<(usize, VertexSet)> = (0..m)
            .filter(|&j| j != i)
            .map(|j| (j, f.intersect(inc.facets[j])))
            .filter(|(_, s)| s.len() >= need && !s.is_empty())
            .collect();
        for &(j, s) in &cands {
            if j < i {
                continue;
            }
            let maximal = cands.iter().all(|&(k, t)| k == j || !s.is_subset(t) || s == t);
            // two facets sharing the same ridge with F would make it a face of
            // three facets, which is impossible for a ridge
            let unique = cands.iter().all(|&(k, t)| k == j || t != s);
            if maximal && unique {
                g.add_edge(i, j);
            }
        }
    }
    g.normalize();
    g
}

/// Vertex-edge graph: vertices `u, v` span an edge iff `{u, v}` is a face.
pub fn vertex_edge_graph(inc: &Incidence) -> Graph {
    let mut g = Graph::new(inc.n);
    for u in 0..inc.n {
        for v in u + 1..inc.n {
            if inc.is_face(VertexSet::from_indices([u, v])) {
                g.add_edge(u, v);
            }
        }
    }
    g.normalize();
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::facets_exact;
    use crate::polytope::Polytope;

    fn cube(d: usize) -> Polytope {
        let rows: Vec<Vec<i64>> = (0..1usize << d)
            .map(|m| (0..d).map(|j| if m >> j & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        Polytope::from_i64_rows(&rows).unwrap()
    }

    fn simplex(d: usize) -> Polytope {
        let mut rows = vec![vec![0i64; d]];
        for j in 0..d {
            let mut r = vec![0; d];
            r[j] = 1;
            rows.push(r);
        }
        Polytope::from_i64_rows(&rows).unwrap()
    }

    #[test]
    fn cube_facets_have_four_neighbours() {
        let inc = facets_exact(&cube(3)).unwrap().incidence;
        let g = facet_ridge_graph(&inc);
        assert!((0..6).all(|i| g.neighbors(i).len() == 4));
    }

    #[test]
    fn simplex_facet_graph_is_complete() {
        for d in 2..=5 {
            let inc = facets_exact(&simplex(d)).unwrap().incidence;
            let g = facet_ridge_graph(&inc);
            assert_eq!(g.edge_count(), (d + 1) * d / 2);
            assert_eq!(vertex_edge_graph(&inc).diameter().unwrap(), 1);
        }
    }

    #[test]
    fn triangular_prism_ridges() {
        let p = Polytope::from_i64_rows(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
            vec![0, 1, 1],
        ])
        .unwrap();
        let inc = facets_exact(&p).unwrap().incidence;
        let g = facet_ridge_graph(&inc);
        assert_eq!(inc.facets.len(), 5);
        for (i, f) in inc.facets.iter().enumerate() {
            let deg = g.neighbors(i).len();
            if f.len() == 3 {
                assert_eq!(deg, 3);
                assert!(g.neighbors(i).iter().all(|&j| inc.facets[j].len() == 4));
            } else {
                assert_eq!(deg, 4);
            }
        }
    }

    #[test]
    fn cube_vertex_graph_diameter() {
        for d in 2..=4 {
            let inc = facets_exact(&cube(d)).unwrap().incidence;
            assert_eq!(vertex_edge_graph(&inc).diameter().unwrap(), d);
        }
    }

    #[test]
    fn path_counts_on_square_cycle() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (dist, cnt) = g.shortest_path_counts(0);
        assert_eq!(dist[2], Some(2));
        assert_eq!(cnt[2], 2);
    }

    #[test]
    fn disconnected_diameter_errors() {
        let g = Graph::from_edges(3, [(0, 1)]);
        assert_eq!(g.diameter(), Err(Error::Disconnected));
    }
}
