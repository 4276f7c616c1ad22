//! Bucket elimination over dense tensors.
//!
//! Every tensor is filed in the bucket of its lowest-ranked variable. Buckets
//! are processed in rank order: the bucket's tensors are contracted over the
//! bucket variable in one fused pass, scalar results multiply into a running
//! accumulator, and tensor results drop into the bucket of their new
//! lowest-ranked variable. Stopping after `stop_index` buckets leaves a
//! partial contraction: the tensors still waiting in later buckets range only
//! over higher-ranked variables. With an order that keeps the free output
//! variables last (see [`crate::ordering::restricted_order_pipeline`]), those
//! leftovers merge into the full 2^c amplitude tensor of a batch.
//!
//! [`process_buckets`] also reports instrumentation: actual flops under the
//! "one complex multiply plus one complex add per fused-loop element"
//! convention (2 * 2^s for a step with elimination clique size s), and the
//! peak of live memory. A step's memory is the tensors it consumes plus its
//! output plus every intermediate still parked in later buckets; original
//! input factors are counted only while being consumed, intermediate results
//! from allocation until consumption, scalars never. [`crate::cost`]
//! predicts both numbers exactly without touching any data.

use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::Circuit;
use crate::graphical_model::{build_amplitude_model, build_model, ModelError};
use crate::ordering::{
    restricted_order_pipeline, EliminationOrder, Heuristic, OrderingError,
};
use crate::tensor::{contract_over, pointwise_product, DenseTensor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error("tensor variable {0} has no rank in the elimination order")]
    VariableWithoutRank(usize),
    #[error("scalar (variable-free) tensors cannot be filed into buckets")]
    ScalarInput,
    #[error("stop index {stop} exceeds the order length {len}")]
    StopOutOfRange { stop: usize, len: usize },
    #[error("bucket at rank {0} is empty; the model and order are inconsistent")]
    EmptyBucket(usize),
    #[error("contraction at rank {0} produced a tensor for an already-processed bucket")]
    BackwardFlow(usize),
    #[error("leftover tensor variable {0} is not a free output variable")]
    LeftoverOutsideFree(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimulationError {
    #[error("circuit has {expected} qubits but {got} output bits were given")]
    WrongBitCount { expected: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
}

/// Tensors filed by the elimination rank of their lowest-ranked variable
/// (bucket `r` lives at index `r - 1`).
#[derive(Debug, Clone)]
pub struct BucketSet {
    buckets: Vec<Vec<DenseTensor>>,
}

impl BucketSet {
    pub fn n_buckets(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket(&self, rank: usize) -> &[DenseTensor] {
        &self.buckets[rank - 1]
    }
}

/// Files each tensor in the bucket of its minimal-rank variable.
pub fn form_buckets(
    tensors: Vec<DenseTensor>,
    order: &EliminationOrder,
) -> Result<BucketSet, ContractionError> {
    let mut buckets = vec![Vec::new(); order.len()];
    for t in tensors {
        let min_rank = t
            .vars()
            .iter()
            .map(|&v| {
                if v >= order.len() {
                    Err(ContractionError::VariableWithoutRank(v))
                } else {
                    Ok(order.rank_of(v))
                }
            })
            .try_fold(usize::MAX, |acc, r| r.map(|r| acc.min(r)))?;
        if min_rank == usize::MAX {
            return Err(ContractionError::ScalarInput);
        }
        buckets[min_rank - 1].push(t);
    }
    Ok(BucketSet { buckets })
}

/// Engine-side counters, matching [`crate::cost::estimate`] exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContractionStats {
    pub flops: u64,
    pub peak_memory_elems: u64,
    pub max_intermediate_order: usize,
}

#[derive(Debug, Clone)]
pub struct ProcessOutcome {
    /// Product of all scalar contraction results.
    pub accumulator: Complex64,
    /// Tensors from buckets past the stop index, untouched or intermediate.
    pub leftovers: Vec<DenseTensor>,
    pub stats: ContractionStats,
}

/// Contracts buckets `1..=stop_index` in rank order. A full run
/// (`stop_index = order.len()`) reduces a closed model to the scalar
/// accumulator; a partial run leaves the tensors over the trailing variables
/// unprocessed.
pub fn process_buckets(
    mut buckets: BucketSet,
    order: &EliminationOrder,
    stop_index: usize,
) -> Result<ProcessOutcome, ContractionError> {
    if stop_index > order.len() {
        return Err(ContractionError::StopOutOfRange {
            stop: stop_index,
            len: order.len(),
        });
    }
    // Tensors present now are original inputs; anything appended during
    // processing is an intermediate. Original factors count toward memory
    // only at the step consuming them, intermediates for their whole life.
    let initial_len: Vec<usize> = buckets.buckets.iter().map(Vec::len).collect();

    let mut accumulator = Complex64::new(1.0, 0.0);
    let mut stats = ContractionStats::default();
    let mut live_intermediates: u64 = 0;

    for rank in 1..=stop_index {
        let var = order.vertex_at(rank);
        let tensors = std::mem::take(&mut buckets.buckets[rank - 1]);
        if tensors.is_empty() {
            return Err(ContractionError::EmptyBucket(rank));
        }

        let consumed_original: u64 = tensors[..initial_len[rank - 1]]
            .iter()
            .map(|t| t.size() as u64)
            .sum();
        let consumed_intermediate: u64 = tensors[initial_len[rank - 1]..]
            .iter()
            .map(|t| t.size() as u64)
            .sum();

        let out = contract_over(&tensors, var);
        // One multiply + one add per element of the fused loop over the
        // elimination clique (out.size() * 2 iterations).
        stats.flops += 4 * out.size() as u64;
        let out_elems = if out.is_scalar() { 0 } else { out.size() as u64 };
        stats.peak_memory_elems = stats
            .peak_memory_elems
            .max(live_intermediates + consumed_original + out_elems);
        live_intermediates -= consumed_intermediate;
        live_intermediates += out_elems;

        if out.is_scalar() {
            accumulator *= out.scalar_value();
        } else {
            stats.max_intermediate_order = stats.max_intermediate_order.max(out.order());
            let next_rank = out
                .vars()
                .iter()
                .map(|&v| order.rank_of(v))
                .min()
                .expect("non-scalar tensor has variables");
            if next_rank <= rank {
                return Err(ContractionError::BackwardFlow(rank));
            }
            buckets.buckets[next_rank - 1].push(out);
        }
    }

    let leftovers: Vec<DenseTensor> = buckets
        .buckets
        .into_iter()
        .skip(stop_index)
        .flatten()
        .collect();
    Ok(ProcessOutcome {
        accumulator,
        leftovers,
        stats,
    })
}

/// Combines the leftovers of a partial contraction into the amplitude tensor
/// over the free variables, listed here in output (qubit) order. Every
/// leftover variable must be free; the accumulator scales every entry.
pub fn merge_free_tensors(
    leftovers: &[DenseTensor],
    free_vars: &[usize],
    accumulator: Complex64,
) -> Result<DenseTensor, ContractionError> {
    for t in leftovers {
        for &v in t.vars() {
            if !free_vars.contains(&v) {
                return Err(ContractionError::LeftoverOutsideFree(v));
            }
        }
    }
    let product = pointwise_product(leftovers, free_vars);
    let data = product.data().iter().map(|z| z * accumulator).collect();
    Ok(DenseTensor::new(free_vars.to_vec(), data))
}

/// Amplitude `<bits|circuit|0...0>` by full bucket elimination.
pub fn simulate_amplitude(
    circuit: &Circuit,
    bits: &[bool],
    heuristic: Heuristic,
) -> Result<Complex64, SimulationError> {
    if bits.len() != circuit.n_qubits() {
        return Err(SimulationError::WrongBitCount {
            expected: circuit.n_qubits(),
            got: bits.len(),
        });
    }
    let model = build_amplitude_model(circuit, bits)?;
    let restricted = restricted_order_pipeline(model.graph(), &BTreeSet::new(), heuristic)?;
    let buckets = form_buckets(model.factor_tensors(), &restricted.order)?;
    let outcome = process_buckets(buckets, &restricted.order, model.n_vars())?;
    debug_assert!(outcome.leftovers.is_empty());
    Ok(outcome.accumulator)
}

/// Amplitudes of all 2^c assignments of the batch qubits (the other qubits'
/// output bits fixed), as a tensor over the batch qubits' free variables in
/// qubit order — so the first batch qubit is the most significant index bit.
///
/// The elimination order is constrained to keep the free variables last;
/// processing stops with exactly those variables open and the leftovers are
/// merged pointwise.
pub fn simulate_batch(
    circuit: &Circuit,
    batch_qubits: &BTreeSet<usize>,
    fixed_bits: &BTreeMap<usize, bool>,
    heuristic: Heuristic,
) -> Result<DenseTensor, SimulationError> {
    let model = build_model(circuit, batch_qubits, fixed_bits)?;
    let free: BTreeSet<usize> = model.free_vars().iter().copied().collect();
    let restricted = restricted_order_pipeline(model.graph(), &free, heuristic)?;
    let stop_index = model.n_vars() - free.len();
    let buckets = form_buckets(model.factor_tensors(), &restricted.order)?;
    let outcome = process_buckets(buckets, &restricted.order, stop_index)?;
    Ok(merge_free_tensors(
        &outcome.leftovers,
        model.free_vars(),
        outcome.accumulator,
    )?)
}
