//! Undirected, unweighted, connected simple graphs.
//!
//! Adjacency is stored in compressed form: `offsets[i]..offsets[i + 1]` is the
//! slice of `neighbors` holding the sorted neighbor list of vertex `i`.

mod generators;
mod io;

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use generators::{barabasi_albert, erdos_renyi, er_connectivity_p, grid_graph, ER_MAX_ATTEMPTS};
pub use io::{load_graph, save_graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    d_max: usize,
}

impl Graph {
    /// Build a graph from an edge list.
    ///
    /// Rejects self-loops, duplicate edges (in either orientation), out of
    /// range endpoints, and disconnected results.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line: idx + 1, vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                let line = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
                    .nth(1)
                    .map_or(0, |(i, _)| i + 1);
                return Err(Error::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
            }
        }
        let g = Self::from_sorted_lists(adj);
        let components = g.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    /// Assemble without validation. Lists must be sorted, symmetric and loop-free.
    pub(crate) fn from_sorted_lists(adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::with_capacity(adj.iter().map(Vec::len).sum());
        let mut d_max = 0;
        for list in &adj {
            d_max = d_max.max(list.len());
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors, d_max }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Hop distances from `source`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Exact diameter from all-pairs BFS.
    pub fn diameter(&self) -> Result<usize> {
        let components = self.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok((0..self.n())
            .into_par_iter()
            .map(|s| self.bfs_distances(s).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0))
    }
}
