//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Vertices are plain `usize` ids; adjacency is kept in sorted sets so that
//! every iteration order (and therefore every tie-break in the ordering
//! algorithms) is deterministic. Self-loops are not representable: a factor
//! over a single variable contributes no edge.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    n_edges: usize,
}

impl Graph {
    pub fn new(n_vertices: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n_vertices],
            n_edges: 0,
        }
    }

    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n_vertices);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Inserts the edge `{u, v}`; returns `false` if it was already present.
    /// Self-loops are rejected because no algorithm here is defined on them.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop {u} is not a graph edge");
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.n_edges += 1;
            true
        } else {
            false
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn neighbor_set(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    /// Connects every pair of the given vertices.
    pub fn add_clique(&mut self, vertices: &BTreeSet<usize>) {
        let vs: Vec<usize> = vertices.iter().copied().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn is_clique(&self, vertices: &BTreeSet<usize>) -> bool {
        let vs: Vec<usize> = vertices.iter().copied().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for u in self.vertices() {
            for &v in self.adj[u].range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }
}
