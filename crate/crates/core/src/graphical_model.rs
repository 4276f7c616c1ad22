//! Lowering circuits to graphical models.
//!
//! Every qubit starts as one network variable (its generation-0 state).
//! Diagonal gates (T, CZ) are functions of the current variables only, so
//! they attach a factor without growing the variable set; non-diagonal gates
//! map the current variable to a fresh one (the qubit's next generation) and
//! attach the gate's 2x2 factor across the pair. Inputs are pinned with
//! `[1, 0]` vectors, fixed output bits with basis vectors, and the final
//! variables of batch qubits stay free. The variable count is therefore
//! `n_qubits + number of non-diagonal gates`.
//!
//! The model graph has one vertex per variable and one edge per two-variable
//! factor; single-variable factors contribute no edge.

use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{gate_tensor, Circuit};
use crate::graph::Graph;
use crate::tensor::DenseTensor;

/// A network variable: one generation of one qubit's state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variable {
    pub id: usize,
    pub qubit: usize,
    pub generation: usize,
}

/// A factor over one or two distinct variables, stored like a [`DenseTensor`]
/// (row-major, first variable most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub vars: Vec<usize>,
    pub data: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("qubit {0} is both batched and fixed")]
    QubitOverlap(usize),
    #[error("qubit {0} is neither batched nor fixed")]
    QubitUnassigned(usize),
    #[error("qubit {qubit} out of range (circuit has {n_qubits} qubits)")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
}

#[derive(Debug, Clone)]
pub struct GraphicalModel {
    variables: Vec<Variable>,
    factors: Vec<Factor>,
    graph: Graph,
    free_vars: Vec<usize>,
    fixed_outputs: BTreeMap<usize, bool>,
}

/// Variable, edge, and factor counts of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelStats {
    pub n_vars: usize,
    pub n_edges: usize,
    pub n_factors: usize,
}

impl GraphicalModel {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Final variables of the batch qubits, in ascending qubit order.
    pub fn free_vars(&self) -> &[usize] {
        &self.free_vars
    }

    pub fn fixed_outputs(&self) -> &BTreeMap<usize, bool> {
        &self.fixed_outputs
    }

    pub fn stats(&self) -> ModelStats {
        ModelStats {
            n_vars: self.variables.len(),
            n_edges: self.graph.n_edges(),
            n_factors: self.factors.len(),
        }
    }

    /// Factors materialized as dense tensors, ready for bucket elimination.
    pub fn factor_tensors(&self) -> Vec<DenseTensor> {
        self.factors
            .iter()
            .map(|f| DenseTensor::new(f.vars.clone(), f.data.clone()))
            .collect()
    }

    /// Just the variable lists of the factors, for symbolic cost analysis.
    pub fn factor_scopes(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.vars.clone()).collect()
    }

    /// Edge-list text form of the model graph: a `p <n_vars> <n_edges>`
    /// header, then one `e u v` line per edge in lexicographic order.
    pub fn export_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.n_vars(), self.graph.n_edges());
        for (u, v) in self.graph.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

fn basis_vector(bit: bool) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if bit {
        vec![zero, one]
    } else {
        vec![one, zero]
    }
}

/// Builds the graphical model of a circuit. `batch_qubits` stay free (their
/// final variables become the open indices of a batched contraction);
/// every other qubit must appear in `fixed_bits`. Use all-fixed for a single
/// amplitude.
pub fn build_model(
    circuit: &Circuit,
    batch_qubits: &BTreeSet<usize>,
    fixed_bits: &BTreeMap<usize, bool>,
) -> Result<GraphicalModel, ModelError> {
    let n = circuit.n_qubits();
    for &q in batch_qubits.iter().chain(fixed_bits.keys()) {
        if q >= n {
            return Err(ModelError::QubitOutOfRange {
                qubit: q,
                n_qubits: n,
            });
        }
    }
    for q in 0..n {
        match (batch_qubits.contains(&q), fixed_bits.contains_key(&q)) {
            (true, true) => return Err(ModelError::QubitOverlap(q)),
            (false, false) => return Err(ModelError::QubitUnassigned(q)),
            _ => {}
        }
    }

    let n_nondiagonal = circuit
        .gates()
        .iter()
        .filter(|g| !g.kind.is_diagonal())
        .count();
    let n_vars = n + n_nondiagonal;

    let mut variables = Vec::with_capacity(n_vars);
    let mut factors = Vec::new();
    let mut graph = Graph::new(n_vars);
    let mut current = vec![0usize; n];
    let mut generation = vec![0usize; n];

    for q in 0..n {
        let id = variables.len();
        variables.push(Variable {
            id,
            qubit: q,
            generation: 0,
        });
        current[q] = id;
        factors.push(Factor {
            vars: vec![id],
            data: basis_vector(false),
        });
    }

    for gate in circuit.gates() {
        let data = gate_tensor(gate.kind);
        if gate.kind.is_diagonal() {
            let vars: Vec<usize> = gate.qubits.iter().map(|&q| current[q]).collect();
            if vars.len() == 2 {
                graph.add_edge(vars[0], vars[1]);
            }
            factors.push(Factor { vars, data });
        } else {
            let q = gate.qubits[0];
            let old = current[q];
            let id = variables.len();
            generation[q] += 1;
            variables.push(Variable {
                id,
                qubit: q,
                generation: generation[q],
            });
            graph.add_edge(old, id);
            factors.push(Factor {
                vars: vec![old, id],
                data,
            });
            current[q] = id;
        }
    }

    for (&q, &bit) in fixed_bits {
        factors.push(Factor {
            vars: vec![current[q]],
            data: basis_vector(bit),
        });
    }
    let free_vars: Vec<usize> = batch_qubits.iter().map(|&q| current[q]).collect();

    Ok(GraphicalModel {
        variables,
        factors,
        graph,
        free_vars,
        fixed_outputs: fixed_bits.clone(),
    })
}

/// Convenience: model of a fully fixed output bitstring (single amplitude).
pub fn build_amplitude_model(
    circuit: &Circuit,
    bits: &[bool],
) -> Result<GraphicalModel, ModelError> {
    let fixed: BTreeMap<usize, bool> = bits.iter().copied().enumerate().collect();
    build_model(circuit, &BTreeSet::new(), &fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_random_circuit, parse};

    fn all_fixed_zero(n: usize) -> BTreeMap<usize, bool> {
        (0..n).map(|q| (q, false)).collect()
    }

    #[test]
    fn single_hadamard_model_shape() {
        let c = parse("1\n1 h 0\n").unwrap();
        let m = build_model(&c, &BTreeSet::new(), &all_fixed_zero(1)).unwrap();
        let stats = m.stats();
        assert_eq!(stats.n_vars, 2);
        assert_eq!(stats.n_factors, 3); // input, gate, output
        assert_eq!(stats.n_edges, 1);
        assert_eq!(m.variables()[1].generation, 1);
        assert_eq!(m.export_edge_list(), "p 2 1\ne 0 1\n");
    }

    #[test]
    fn empty_circuit_model_shape() {
        let c = parse("1\n").unwrap();
        let m = build_model(&c, &BTreeSet::new(), &all_fixed_zero(1)).unwrap();
        assert_eq!(
            m.stats(),
            ModelStats {
                n_vars: 1,
                n_edges: 0,
                n_factors: 2
            }
        );
    }

    #[test]
    fn two_hadamards_chain_three_variables() {
        let c = parse("1\n1 h 0\n2 h 0\n").unwrap();
        let m = build_model(&c, &BTreeSet::new(), &all_fixed_zero(1)).unwrap();
        let stats = m.stats();
        assert_eq!((stats.n_vars, stats.n_factors), (3, 4));
        assert_eq!(m.export_edge_list(), "p 3 2\ne 0 1\ne 1 2\n");
    }

    #[test]
    fn cz_connects_current_generations_without_new_variable() {
        let c = parse("2\n1 h 0\n1 h 1\n2 cz 0 1\n").unwrap();
        let m = build_model(&c, &BTreeSet::new(), &all_fixed_zero(2)).unwrap();
        assert_eq!(m.n_vars(), 4);
        // Generation-1 variables of the two qubits are ids 2 and 3.
        assert!(m.graph().has_edge(2, 3));
        assert_eq!(m.graph().n_edges(), 3);
        // input x2, H x2, CZ, output x2
        assert_eq!(m.factors().len(), 7);
    }

    #[test]
    fn diagonal_gates_never_add_variables() {
        let c = parse("2\n1 t 0\n1 t 1\n2 cz 0 1\n3 t 0\n").unwrap();
        let m = build_model(&c, &BTreeSet::new(), &all_fixed_zero(2)).unwrap();
        assert_eq!(m.n_vars(), 2);
        assert_eq!(m.graph().n_edges(), 1);
    }

    #[test]
    fn variable_count_is_qubits_plus_nondiagonal_gates() {
        for seed in 0..6 {
            let c = generate_random_circuit(3, 7, seed);
            let m = build_amplitude_model(&c, &[false; 9]).unwrap();
            let nondiag = c.gates().iter().filter(|g| !g.kind.is_diagonal()).count();
            assert_eq!(m.n_vars(), c.n_qubits() + nondiag);
            // Every variable has at least one factor over it.
            let mut touched = vec![false; m.n_vars()];
            for f in m.factors() {
                for &v in &f.vars {
                    touched[v] = true;
                }
            }
            assert!(touched.iter().all(|&t| t));
        }
    }

    #[test]
    fn batch_qubits_leave_final_variables_free() {
        let c = parse("3\n1 h 0\n1 h 1\n1 h 2\n2 cz 0 1\n").unwrap();
        let batch: BTreeSet<usize> = [2, 0].into_iter().collect();
        let fixed: BTreeMap<usize, bool> = [(1, true)].into_iter().collect();
        let m = build_model(&c, &batch, &fixed).unwrap();
        // Free variables come back in qubit order: qubit 0's gen-1 variable
        // (id 3), then qubit 2's (id 5).
        assert_eq!(m.free_vars(), &[3, 5]);
        // Fixed qubit 1 got a |1> output factor on its final variable.
        let out = m
            .factors()
            .iter()
            .find(|f| f.vars == vec![4] && f.data[0].norm() == 0.0)
            .expect("output factor on qubit 1");
        assert_eq!(out.data[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn output_partition_is_validated() {
        let c = parse("2\n1 h 0\n1 h 1\n").unwrap();
        let both: BTreeSet<usize> = [0].into_iter().collect();
        let fixed: BTreeMap<usize, bool> = [(0, false), (1, false)].into_iter().collect();
        assert_eq!(
            build_model(&c, &both, &fixed).unwrap_err(),
            ModelError::QubitOverlap(0)
        );
        let none: BTreeSet<usize> = BTreeSet::new();
        let partial: BTreeMap<usize, bool> = [(0, false)].into_iter().collect();
        assert_eq!(
            build_model(&c, &none, &partial).unwrap_err(),
            ModelError::QubitUnassigned(1)
        );
        let skewed: BTreeMap<usize, bool> = [(0, false), (5, false)].into_iter().collect();
        assert!(matches!(
            build_model(&c, &none, &skewed),
            Err(ModelError::QubitOutOfRange { qubit: 5, .. })
        ));
    }
}
