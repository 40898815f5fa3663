//! Weighted undirected simple graphs.
//!
//! Edges are stored in canonical order: each edge has `u < v` and the list is
//! sorted lexicographically by `(u, v)`. Edge index `i` is therefore a stable
//! identity, and sample bitvectors are aligned with it.

mod io;
mod rounding;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub(crate) use io::content_lines;
pub use rounding::{round_to_multigraph, RoundedMultigraph, ROUNDING_DELTA};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

/// Shortest cycle length, ignoring weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples in any order and orientation.
    ///
    /// Rejects self-loops, parallel edges, out-of-range endpoints and
    /// weights that are not finite and positive.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
                expected: "at least one vertex",
            });
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, dim: n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { v: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { u, v, w });
            }
            list.push(Edge { u, v, w });
        }
        list.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = list.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::DuplicateEdge {
                u: pair[0].u,
                v: pair[0].v,
            });
        }
        Ok(Self { n, edges: list })
    }

    pub fn unweighted<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().map(|e| e.w)
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.weights().reduce(f64::min)
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.weights().reduce(f64::max)
    }

    /// Subgraph on the same vertex set keeping the edges with `keep[i]`,
    /// each reweighted by `reweight(i, edge)`.
    pub(crate) fn filter_edges(
        &self,
        keep: &[bool],
        mut reweight: impl FnMut(usize, &Edge) -> f64,
    ) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(i, e)| Edge {
                w: reweight(i, e),
                ..*e
            })
            .collect();
        Self { n: self.n, edges }
    }

    /// Adjacency lists without weights.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for e in &self.edges {
            l.add_edge_term(e.u, e.v, e.w);
        }
        l
    }

    /// True iff the underlying simple graph has a single component.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// Shortest cycle length via a BFS from every vertex.
    ///
    /// A non-tree edge `(x, y)` seen from root `r` closes a closed walk of
    /// length `d(x) + d(y) + 1` through `r`; the minimum over all roots is
    /// exactly the girth.
    pub fn girth(&self) -> Girth {
        let adj = self.neighbors();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                // Cycles found deeper than this cannot beat the current best.
                if 2 * dist[x] + 1 >= best {
                    break;
                }
                for &y in &adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Largest sum of incident edge weights over all vertices.
    pub fn max_weighted_degree(&self) -> Result<f64> {
        if self.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.u] += e.w;
            deg[e.v] += e.w;
        }
        Ok(deg.into_iter().fold(0.0, f64::max))
    }
}

/// `(e_a - e_b)(e_a - e_b)^T` as an `n x n` matrix.
pub fn edge_laplacian(a: usize, b: usize, n: usize) -> Result<SymMatrix> {
    for x in [a, b] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, dim: n });
        }
    }
    if a == b {
        return Err(Error::SelfLoop { v: a });
    }
    let mut l = SymMatrix::zeros(n);
    l.add_edge_term(a, b, 1.0);
    Ok(l)
}
