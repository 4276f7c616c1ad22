//! Symbolic cost prediction for bucket elimination.
//!
//! [`estimate`] dry-runs the bucket engine on factor *scopes* (variable lists
//! without data). A step eliminating a variable whose bucket unions to an
//! elimination clique of size `s` costs `2 * 2^s` flops (one complex multiply
//! plus one complex add per fused-loop element) and produces a `2^(s-1)`
//! element tensor; the dominant step therefore costs `2^(treewidth + 2)`.
//! Memory accounting matches [`crate::contraction::process_buckets`]: a
//! step's footprint is its consumed tensors plus its output plus intermediate
//! tensors parked in later buckets, with original factors counted only while
//! being consumed and scalar outputs not at all. Because engine and estimator
//! walk identical bucket structures, their flop and peak-memory numbers agree
//! exactly, which the tests enforce.

use std::collections::BTreeSet;

use crate::circuit::Circuit;
use crate::contraction::SimulationError;
use crate::graphical_model::build_model;
use crate::ordering::{restricted_order_pipeline, EliminationOrder, Heuristic};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CostError {
    #[error("model has no factors")]
    EmptyModel,
    #[error("scope variable {0} has no rank in the elimination order")]
    VariableWithoutRank(usize),
    #[error("free variables must occupy the final ranks of the order")]
    FreeNotSuffix,
    #[error("bucket at rank {0} is empty; the scopes and order are inconsistent")]
    EmptyBucket(usize),
}

/// Predicted cost of one elimination step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostStep {
    pub rank: usize,
    /// Union of the bucket's scopes, eliminated variable included.
    pub clique_size: usize,
    pub flops: u64,
    /// `2^(clique_size - 1)`; a value of 1 means a scalar result.
    pub output_elems: u64,
    /// Elements read plus elements written by the fused loop.
    pub mem_touched: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub total_flops: u64,
    pub peak_memory_elems: u64,
    /// Largest clique over the simulated steps, minus one.
    pub treewidth: usize,
    pub per_step: Vec<CostStep>,
}

/// Predicts the cost of eliminating every variable except `free`, which must
/// hold the final ranks of the order (a partial, batched contraction stops
/// there). Scopes with no variables are scalars and cost nothing.
pub fn estimate(
    scopes: &[Vec<usize>],
    order: &EliminationOrder,
    free: &BTreeSet<usize>,
) -> Result<CostReport, CostError> {
    if scopes.is_empty() {
        return Err(CostError::EmptyModel);
    }
    let n = order.len();
    for &v in free {
        if v >= n {
            return Err(CostError::VariableWithoutRank(v));
        }
        if order.rank_of(v) <= n - free.len() {
            return Err(CostError::FreeNotSuffix);
        }
    }
    let stop_index = n - free.len();

    struct SymbolicTensor {
        vars: BTreeSet<usize>,
        intermediate: bool,
    }
    let size_of = |vars: &BTreeSet<usize>| -> u64 { 1 << vars.len() };

    let mut buckets: Vec<Vec<SymbolicTensor>> = (0..n).map(|_| Vec::new()).collect();
    for scope in scopes {
        let vars: BTreeSet<usize> = scope.iter().copied().collect();
        if vars.is_empty() {
            continue;
        }
        let mut min_rank = usize::MAX;
        for &v in &vars {
            if v >= n {
                return Err(CostError::VariableWithoutRank(v));
            }
            min_rank = min_rank.min(order.rank_of(v));
        }
        buckets[min_rank - 1].push(SymbolicTensor {
            vars,
            intermediate: false,
        });
    }

    let mut per_step = Vec::with_capacity(stop_index);
    let mut total_flops = 0u64;
    let mut peak = 0u64;
    let mut live_intermediates = 0u64;
    let mut max_clique = 0usize;

    for rank in 1..=stop_index {
        let var = order.vertex_at(rank);
        let tensors = std::mem::take(&mut buckets[rank - 1]);
        if tensors.is_empty() {
            return Err(CostError::EmptyBucket(rank));
        }

        let mut union: BTreeSet<usize> = BTreeSet::new();
        let mut consumed_original = 0u64;
        let mut consumed_intermediate = 0u64;
        let mut operand_elems = 0u64;
        for t in &tensors {
            union.extend(t.vars.iter().copied());
            let sz = size_of(&t.vars);
            operand_elems += sz;
            if t.intermediate {
                consumed_intermediate += sz;
            } else {
                consumed_original += sz;
            }
        }
        debug_assert!(union.contains(&var));
        let clique_size = union.len();
        max_clique = max_clique.max(clique_size);

        let mut out_vars = union;
        out_vars.remove(&var);
        let output_elems = 1u64 << out_vars.len();
        let out_live = if out_vars.is_empty() { 0 } else { output_elems };
        let flops = 2 * (1u64 << clique_size);

        total_flops += flops;
        peak = peak.max(live_intermediates + consumed_original + out_live);
        live_intermediates -= consumed_intermediate;
        live_intermediates += out_live;
        per_step.push(CostStep {
            rank,
            clique_size,
            flops,
            output_elems,
            mem_touched: operand_elems + out_live,
        });

        if !out_vars.is_empty() {
            let next_rank = out_vars.iter().map(|&v| order.rank_of(v)).min().unwrap();
            debug_assert!(next_rank > rank);
            buckets[next_rank - 1].push(SymbolicTensor {
                vars: out_vars,
                intermediate: true,
            });
        }
    }

    Ok(CostReport {
        total_flops,
        peak_memory_elems: peak,
        treewidth: max_clique.saturating_sub(1),
        per_step,
    })
}

/// Flop-per-memory-access ratios of a predicted contraction. Each output
/// element costs at most `2L = 4` flops, so per-step ratios never exceed 4.
#[derive(Debug, Clone, PartialEq)]
pub struct FlopsPerMemory {
    pub per_step: Vec<f64>,
    pub aggregate: f64,
}

/// Ratio of flops to memory elements touched, per step and for the whole
/// run. A run that touches no memory at all (a scalar-only model) reports
/// the conventional per-element bound `2L = 4`.
pub fn flops_per_memory(report: &CostReport) -> FlopsPerMemory {
    let per_step = report
        .per_step
        .iter()
        .map(|s| s.flops as f64 / s.mem_touched as f64)
        .collect();
    let touched: u64 = report.per_step.iter().map(|s| s.mem_touched).sum();
    let aggregate = if touched == 0 {
        4.0
    } else {
        report.total_flops as f64 / touched as f64
    };
    FlopsPerMemory {
        per_step,
        aggregate,
    }
}

/// One row of the batch-size trade-off table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeoffRow {
    pub c_size: usize,
    /// Width of the restricted order on the clique-completed model graph.
    pub treewidth: usize,
    pub total_flops: u64,
    pub peak_memory_elems: u64,
    /// Cost of the naive alternative: 2^c separate single-amplitude runs.
    pub naive_flops: u64,
}

/// Predicted cost of batching over the first `c` qubits, for each requested
/// `c`. Non-batch qubits are fixed to 0 (the choice of fixed bits does not
/// affect cost). The naive column scales the `c = 0` cost by 2^c.
pub fn batch_tradeoff_table(
    circuit: &Circuit,
    c_sizes: &[usize],
    heuristic: Heuristic,
) -> Result<Vec<TradeoffRow>, SimulationError> {
    let single = cost_of_batch(circuit, 0, heuristic)?;
    let mut rows = Vec::with_capacity(c_sizes.len());
    for &c_size in c_sizes {
        let (report, treewidth) = if c_size == 0 {
            single.clone()
        } else {
            cost_of_batch(circuit, c_size, heuristic)?
        };
        rows.push(TradeoffRow {
            c_size,
            treewidth,
            total_flops: report.total_flops,
            peak_memory_elems: report.peak_memory_elems,
            naive_flops: (1u64 << c_size) * single.0.total_flops,
        });
    }
    Ok(rows)
}

/// Cost report and restricted-order treewidth for batching the first
/// `c_size` qubits of the circuit.
pub fn cost_of_batch(
    circuit: &Circuit,
    c_size: usize,
    heuristic: Heuristic,
) -> Result<(CostReport, usize), SimulationError> {
    assert!(
        c_size <= circuit.n_qubits(),
        "cannot batch more qubits than the circuit has"
    );
    let batch: BTreeSet<usize> = (0..c_size).collect();
    let fixed = (c_size..circuit.n_qubits()).map(|q| (q, false)).collect();
    let model = build_model(circuit, &batch, &fixed)?;
    let free: BTreeSet<usize> = model.free_vars().iter().copied().collect();
    let restricted = restricted_order_pipeline(model.graph(), &free, heuristic)?;
    let report = estimate(&model.factor_scopes(), &restricted.order, &free)
        .expect("a circuit model always yields a consistent bucket walk");
    Ok((report, restricted.treewidth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::generate_random_circuit;
    use crate::contraction::{form_buckets, process_buckets};
    use crate::graphical_model::build_amplitude_model;
    use crate::ordering::restricted_order_pipeline;

    /// Two order-3 tensors contracted over their shared variable `l`:
    /// A(i,j,l) * B(j,k,l) -> C(i,j,k).
    #[test]
    fn pair_contraction_costs_match_the_closed_form() {
        let (i, j, k, l) = (0usize, 1, 2, 3);
        let scopes = vec![vec![i, j, l], vec![j, k, l]];
        let order = EliminationOrder::from_sequence(vec![l, i, j, k]).unwrap();
        let free: BTreeSet<usize> = [i, j, k].into_iter().collect();
        let report = estimate(&scopes, &order, &free).unwrap();

        assert_eq!(report.per_step.len(), 1);
        let step = report.per_step[0];
        // L^4 multiplies + L^4 adds at L = 2.
        assert_eq!(step.flops, 32);
        assert_eq!(step.clique_size, 4);
        assert_eq!(step.output_elems, 8);
        // A, B, and C live simultaneously: 3 * L^3 elements.
        assert_eq!(report.peak_memory_elems, 24);
        assert_eq!(report.total_flops, 32);
    }

    #[test]
    fn example_network_step_costs_decay_from_the_dominant_step() {
        // A(i,j) B(j,k) C(i,k,l) D(k,m) E(l,n) F(m,n), identity order.
        let scopes = vec![
            vec![0, 1],
            vec![1, 2],
            vec![0, 2, 3],
            vec![2, 4],
            vec![3, 5],
            vec![4, 5],
        ];
        let order = EliminationOrder::from_sequence(vec![0, 1, 2, 3, 4, 5]).unwrap();
        let report = estimate(&scopes, &order, &BTreeSet::new()).unwrap();
        let flops: Vec<u64> = report.per_step.iter().map(|s| s.flops).collect();
        assert_eq!(flops, vec![32, 16, 16, 16, 8, 4]);
        let cliques: Vec<usize> = report.per_step.iter().map(|s| s.clique_size).collect();
        assert_eq!(cliques, vec![4, 3, 3, 3, 2, 1]);
        assert_eq!(report.treewidth, 3);
        assert_eq!(report.total_flops, 92);
    }

    #[test]
    fn isolated_vertex_costs_the_minimum() {
        let scopes = vec![vec![0]];
        let order = EliminationOrder::from_sequence(vec![0]).unwrap();
        let report = estimate(&scopes, &order, &BTreeSet::new()).unwrap();
        assert_eq!(report.total_flops, 4); // 2 * L
        assert_eq!(report.per_step[0].output_elems, 1); // scalar
        assert_eq!(report.peak_memory_elems, 2); // the operand vector
        assert_eq!(report.treewidth, 0);
    }

    #[test]
    fn free_variables_must_be_an_order_suffix() {
        let scopes = vec![vec![0, 1]];
        let order = EliminationOrder::from_sequence(vec![0, 1]).unwrap();
        let bad: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(
            estimate(&scopes, &order, &bad).unwrap_err(),
            CostError::FreeNotSuffix
        );
        let good: BTreeSet<usize> = [1].into_iter().collect();
        assert!(estimate(&scopes, &order, &good).is_ok());
        assert_eq!(
            estimate(&[], &order, &good).unwrap_err(),
            CostError::EmptyModel
        );
    }

    #[test]
    fn estimate_matches_instrumented_engine_exactly() {
        for seed in 0..8 {
            let circuit = generate_random_circuit(2 + (seed as usize % 2), 6, seed);
            let model = build_amplitude_model(&circuit, &vec![false; circuit.n_qubits()])
                .unwrap();
            let restricted =
                restricted_order_pipeline(model.graph(), &BTreeSet::new(), Heuristic::MinFill)
                    .unwrap();
            let report =
                estimate(&model.factor_scopes(), &restricted.order, &BTreeSet::new()).unwrap();
            let outcome = process_buckets(
                form_buckets(model.factor_tensors(), &restricted.order).unwrap(),
                &restricted.order,
                model.n_vars(),
            )
            .unwrap();
            assert_eq!(report.total_flops, outcome.stats.flops, "seed {seed}");
            assert_eq!(
                report.peak_memory_elems, outcome.stats.peak_memory_elems,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn per_step_ratio_never_exceeds_four() {
        let (i, j, k, l) = (0usize, 1, 2, 3);
        let scopes = vec![vec![i, j, l], vec![j, k, l]];
        let order = EliminationOrder::from_sequence(vec![l, i, j, k]).unwrap();
        let free: BTreeSet<usize> = [i, j, k].into_iter().collect();
        let report = estimate(&scopes, &order, &free).unwrap();
        let ratios = flops_per_memory(&report);
        assert_eq!(ratios.per_step.len(), 1);
        assert!((ratios.per_step[0] - 32.0 / 24.0).abs() < 1e-12);
        assert!(ratios.aggregate <= 4.0);

        for seed in 0..5 {
            let circuit = generate_random_circuit(3, 8, seed);
            let (report, _) = cost_of_batch(&circuit, 0, Heuristic::MinFill).unwrap();
            for r in flops_per_memory(&report).per_step {
                assert!(r <= 4.0 + 1e-12);
            }
        }
    }

    #[test]
    fn tradeoff_table_reports_naive_comparison() {
        let circuit = generate_random_circuit(3, 8, 1);
        let rows = batch_tradeoff_table(&circuit, &[0, 1, 2, 3], Heuristic::MinFill).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].c_size, 0);
        assert_eq!(rows[0].naive_flops, rows[0].total_flops);
        for (c, row) in rows.iter().enumerate() {
            assert_eq!(row.c_size, c);
            assert_eq!(row.naive_flops, (1u64 << c) * rows[0].total_flops);
        }
    }
}
