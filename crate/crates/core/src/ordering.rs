//! Variable elimination orders and their treewidth.
//!
//! An elimination order assigns every graph vertex a rank `1..=n`. Processing
//! vertices in rank order and connecting the higher-ranked neighbors of each
//! (the "fill-in" construction) yields a chordal supergraph; the width of the
//! order is the largest elimination clique encountered, minus one. The
//! minimum width over all orders is the graph's treewidth, and contraction
//! cost is exponential in the width of the order actually used.
//!
//! Orders come from three sources here:
//! - [`greedy_order`]: min-fill or min-degree heuristics;
//! - [`exhaustive_order`]: exact search for small graphs (up to 12 vertices);
//! - [`restricted_mcs`]: maximum-cardinality search seeded with a set `C`
//!   that must land at the *end* of the order. Given a chordal graph in which
//!   `C` is a clique, the MCS order is a perfect elimination order, so
//!   re-eliminating adds no fill. [`restricted_order_pipeline`] chains these:
//!   clique-complete `C`, order greedily, build the fill-in, then re-derive a
//!   `C`-last order of equal width. Pinning output variables last is what
//!   lets a batched contraction stop early with only those variables open.

use crate::graph::Graph;
use std::collections::BTreeSet;

/// Largest vertex count for which exact search is allowed.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderingError {
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("cannot parse `{0}` as a vertex id")]
    BadToken(String),
    #[error("graph has {n} vertices, exact search is capped at {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("constrained set is not a clique of the fill-in graph")]
    ConstraintNotClique,
    #[error("constrained vertex {0} is not in the graph")]
    ConstraintOutsideGraph(usize),
    #[error("graph is not chordal")]
    NotChordal,
}

/// Bijection between vertices and elimination ranks `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    rank: Vec<usize>,
    by_rank: Vec<usize>,
}

impl EliminationOrder {
    /// Builds an order from the vertex sequence `(rank 1, rank 2, ...)`.
    pub fn from_sequence(seq: Vec<usize>) -> Result<Self, OrderingError> {
        let n = seq.len();
        let mut rank = vec![0usize; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n || rank[v] != 0 {
                return Err(OrderingError::NotAPermutation(n));
            }
            rank[v] = i + 1;
        }
        Ok(EliminationOrder { rank, by_rank: seq })
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    /// 1-based rank of a vertex.
    pub fn rank_of(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Vertex holding the given 1-based rank.
    pub fn vertex_at(&self, rank: usize) -> usize {
        self.by_rank[rank - 1]
    }

    /// Vertices in rank order.
    pub fn sequence(&self) -> &[usize] {
        &self.by_rank
    }

    /// Whitespace-separated vertex ids in rank order.
    pub fn to_text(&self) -> String {
        self.by_rank
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_text(text: &str) -> Result<Self, OrderingError> {
        let seq = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| OrderingError::BadToken(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EliminationOrder::from_sequence(seq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

/// Greedy elimination order; ties always break toward the smallest vertex id,
/// so the result is deterministic.
pub fn greedy_order(g: &Graph, heuristic: Heuristic) -> EliminationOrder {
    let n = g.n_vertices();
    let mut adj: Vec<BTreeSet<usize>> = g.vertices().map(|v| g.neighbor_set(v).clone()).collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut seq = Vec::with_capacity(n);

    let fill_count = |adj: &Vec<BTreeSet<usize>>, v: usize| -> usize {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };

    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None; // (score, vertex)
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let score = match heuristic {
                Heuristic::MinDegree => adj[v].len(),
                Heuristic::MinFill => fill_count(&adj, v),
            };
            if best.map_or(true, |(s, _)| score < s) {
                best = Some((score, v));
            }
        }
        let (_, v) = best.expect("at least one vertex alive");
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &w in &nbrs {
            adj[w].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        seq.push(v);
    }
    EliminationOrder::from_sequence(seq).expect("constructed a permutation")
}

/// Exact minimum-width order via dynamic programming over subsets.
///
/// The graph left after eliminating a set `S` does not depend on the order
/// within `S`, and the elimination clique of the next vertex `v` is `v` plus
/// every vertex outside `S` reachable from `v` through `S`. Minimizing the
/// maximum clique over all insertion sequences of subsets is therefore
/// equivalent to trying every permutation, at `O(2^n)` instead of `O(n!)`.
pub fn exhaustive_order(g: &Graph) -> Result<EliminationOrder, OrderingError> {
    let n = g.n_vertices();
    if n > EXHAUSTIVE_LIMIT {
        return Err(OrderingError::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if n == 0 {
        return EliminationOrder::from_sequence(Vec::new());
    }

    let full: usize = (1 << n) - 1;
    let mut best = vec![u32::MAX; 1 << n];
    let mut choice = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for mask in 0..=full {
        if best[mask] == u32::MAX {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let s = elimination_clique_through(g, mask, v) as u32;
            let val = best[mask].max(s);
            let next = mask | (1 << v);
            if val < best[next] {
                best[next] = val;
                choice[next] = v;
            }
        }
    }

    let mut seq = vec![0usize; n];
    let mut mask = full;
    for pos in (0..n).rev() {
        let v = choice[mask];
        seq[pos] = v;
        mask &= !(1 << v);
    }
    EliminationOrder::from_sequence(seq)
}

/// Size of the elimination clique of `v` once exactly the vertices in `mask`
/// have been eliminated: `v` plus all outside vertices reachable from `v`
/// through eliminated ones.
fn elimination_clique_through(g: &Graph, mask: usize, v: usize) -> usize {
    let mut reached = 0usize;
    let mut stack = vec![v];
    let mut visited = 1usize << v;
    while let Some(u) = stack.pop() {
        for w in g.neighbors(u) {
            if visited & (1 << w) != 0 {
                continue;
            }
            visited |= 1 << w;
            if mask & (1 << w) != 0 {
                stack.push(w);
            } else {
                reached += 1;
            }
        }
    }
    reached + 1
}

/// Chordal supergraph produced by running the fill-in construction; the
/// wrapped graph is guaranteed chordal.
#[derive(Debug, Clone)]
pub struct FillInGraph {
    graph: Graph,
}

impl FillInGraph {
    /// Wraps an externally supplied graph, verifying chordality.
    pub fn try_new(graph: Graph) -> Result<Self, OrderingError> {
        if !is_chordal(&graph) {
            return Err(OrderingError::NotChordal);
        }
        Ok(FillInGraph { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

fn fill_in(g: &Graph, order: &EliminationOrder) -> (Graph, Vec<usize>) {
    assert_eq!(g.n_vertices(), order.len(), "order must cover the graph");
    let mut h = g.clone();
    let mut clique_sizes = Vec::with_capacity(order.len());
    for r in 1..=order.len() {
        let v = order.vertex_at(r);
        let higher: Vec<usize> = h
            .neighbors(v)
            .filter(|&w| order.rank_of(w) > r)
            .collect();
        clique_sizes.push(higher.len() + 1);
        for (i, &a) in higher.iter().enumerate() {
            for &b in &higher[i + 1..] {
                h.add_edge(a, b);
            }
        }
    }
    (h, clique_sizes)
}

/// Runs the fill-in construction: for each vertex in rank order, connect all
/// pairs of its higher-ranked neighbors in the growing edge set. The result
/// is chordal and the order is one of its perfect elimination orders.
pub fn build_chordal_graph(g: &Graph, order: &EliminationOrder) -> FillInGraph {
    let (graph, _) = fill_in(g, order);
    debug_assert!(is_chordal(&graph));
    FillInGraph { graph }
}

/// Elimination clique size at each rank of the fill-in process.
pub fn elimination_clique_sizes(g: &Graph, order: &EliminationOrder) -> Vec<usize> {
    fill_in(g, order).1
}

/// Width of an order: largest elimination clique during fill-in, minus one.
/// Equals the largest clique of [`build_chordal_graph`]'s output minus one.
pub fn treewidth_of_order(g: &Graph, order: &EliminationOrder) -> usize {
    elimination_clique_sizes(g, order)
        .into_iter()
        .max()
        .unwrap_or(1)
        - 1
}

/// Maximum-cardinality search, optionally seeded with a set that receives the
/// highest ranks. Ranks are assigned from `n` downward; the next vertex is
/// taken from the seed set while it lasts (smallest id first), afterwards an
/// unlabeled vertex with the most labeled neighbors (ties toward the smallest
/// id). Labeling a vertex bumps the count of its unlabeled neighbors.
fn mcs_core(g: &Graph, constrained: &BTreeSet<usize>) -> EliminationOrder {
    let n = g.n_vertices();
    let mut rank = vec![0usize; n];
    let mut by_rank = vec![0usize; n];
    let mut cardinality = vec![0usize; n];
    let mut pending: BTreeSet<usize> = constrained.clone();
    for r in (1..=n).rev() {
        let v = if let Some(&v) = pending.iter().next() {
            pending.remove(&v);
            v
        } else {
            let mut best: Option<(usize, usize)> = None; // (cardinality, vertex)
            for v in 0..n {
                if rank[v] == 0 && best.map_or(true, |(c, _)| cardinality[v] > c) {
                    best = Some((cardinality[v], v));
                }
            }
            best.expect("unlabeled vertex remains").1
        };
        rank[v] = r;
        by_rank[r - 1] = v;
        for w in g.neighbors(v) {
            if rank[w] == 0 {
                cardinality[w] += 1;
            }
        }
    }
    EliminationOrder { rank, by_rank }
}

/// Plain maximum-cardinality search order.
pub fn mcs_order(g: &Graph) -> EliminationOrder {
    mcs_core(g, &BTreeSet::new())
}

/// Standard zero-fill test: a graph is chordal iff re-eliminating it along
/// its own MCS order adds no fill edges.
pub fn is_chordal(g: &Graph) -> bool {
    let order = mcs_order(g);
    let (h, _) = fill_in(g, &order);
    h.n_edges() == g.n_edges()
}

/// MCS order of a chordal graph with the clique `constrained` forced into the
/// final ranks. The output is a perfect elimination order of `fill_in`, so
/// eliminating along it re-creates no fill and preserves the width realized
/// by whatever order produced `fill_in`.
pub fn restricted_mcs(
    fill_in: &FillInGraph,
    constrained: &BTreeSet<usize>,
) -> Result<EliminationOrder, OrderingError> {
    let g = fill_in.graph();
    for &v in constrained {
        if v >= g.n_vertices() {
            return Err(OrderingError::ConstraintOutsideGraph(v));
        }
    }
    if !g.is_clique(constrained) {
        return Err(OrderingError::ConstraintNotClique);
    }
    Ok(mcs_core(g, constrained))
}

/// An order with the constrained variables at the end, plus its width on the
/// clique-completed input graph.
#[derive(Debug, Clone)]
pub struct RestrictedOrder {
    pub order: EliminationOrder,
    pub treewidth: usize,
}

/// Derives an elimination order that places `constrained` last without
/// sacrificing width:
///
/// 1. connect `constrained` into a clique (yielding `G~`),
/// 2. order `G~` exactly when small enough, greedily otherwise,
/// 3. build the chordal fill-in graph of that order,
/// 4. re-derive a `constrained`-last perfect elimination order by MCS.
///
/// The reported treewidth is measured on `G~`. It never exceeds the width of
/// the step-2 order.
pub fn restricted_order_pipeline(
    g: &Graph,
    constrained: &BTreeSet<usize>,
    heuristic: Heuristic,
) -> Result<RestrictedOrder, OrderingError> {
    for &v in constrained {
        if v >= g.n_vertices() {
            return Err(OrderingError::ConstraintOutsideGraph(v));
        }
    }
    let mut g_tilde = g.clone();
    g_tilde.add_clique(constrained);
    let base = if g_tilde.n_vertices() <= EXHAUSTIVE_LIMIT {
        exhaustive_order(&g_tilde)?
    } else {
        greedy_order(&g_tilde, heuristic)
    };
    let chordal = build_chordal_graph(&g_tilde, &base);
    let order = restricted_mcs(&chordal, constrained)?;
    let treewidth = treewidth_of_order(&g_tilde, &order);
    Ok(RestrictedOrder { order, treewidth })
}
