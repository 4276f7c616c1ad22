//! Simulation of quantum circuits by tensor-network contraction.
//!
//! A circuit over the gate set {H, T, X^1/2, Y^1/2, CZ} is lowered to a
//! graphical model whose vertices are the unique tensor indices appearing in
//! the network (one variable per qubit "generation"; diagonal gates reuse the
//! current variable, non-diagonal gates introduce a new one). Contracting the
//! network in a given variable-elimination order computes either a single
//! amplitude or, by leaving some output variables free, a batch of 2^c
//! amplitudes at once.
//!
//! The cost of an elimination order is governed by the treewidth it induces
//! on the model graph: the dominant contraction step touches 2^(treewidth+1)
//! elements. [`ordering`] provides greedy and exact order search plus a
//! maximum-cardinality-search pipeline that constrains chosen variables to
//! the end of the order without degrading its treewidth, which is what makes
//! batched (multi-amplitude) contraction cheap. [`cost`] predicts flop and
//! memory cost symbolically, and [`oracle`] holds a brute-force state-vector
//! simulator used as an independent correctness reference.

pub mod circuit;
pub mod contraction;
pub mod cost;
pub mod graph;
pub mod graphical_model;
pub mod oracle;
pub mod ordering;
pub mod tensor;

pub use circuit::{Circuit, Gate, GateKind};
pub use graph::Graph;
pub use graphical_model::GraphicalModel;
pub use ordering::{EliminationOrder, Heuristic};
pub use tensor::DenseTensor;
