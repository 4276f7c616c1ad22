//! Brute-force state-vector simulation, used as the correctness reference
//! for the tensor-network engine.
//!
//! Deliberately naive and structurally independent of the contraction code:
//! the full 2^n state vector is held in memory and every gate is applied as
//! a dense 2x2 or 4x4 matrix over the addressed qubit lines, diagonal or
//! not. Capped at 20 qubits (16 MiB of amplitudes).
//!
//! Index convention: qubit 0 owns the most significant bit of the state
//! index, matching the bitstring order used everywhere else.

use num_complex::Complex64;

use crate::circuit::{gate_matrix, Circuit, Gate};

pub const MAX_ORACLE_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{n} qubits exceed the brute-force limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },
}

#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero_state(n_qubits: usize) -> Result<Self, OracleError> {
        if n_qubits > MAX_ORACLE_QUBITS {
            return Err(OracleError::TooManyQubits {
                n: n_qubits,
                limit: MAX_ORACLE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude of the basis state given as one bit per qubit.
    pub fn amplitude_of(&self, bits: &[bool]) -> Complex64 {
        assert_eq!(bits.len(), self.n_qubits, "one bit per qubit");
        let mut idx = 0usize;
        for &b in bits {
            idx = (idx << 1) | b as usize;
        }
        self.amps[idx]
    }

    /// Applies a single gate as a dense matrix over its qubit lines.
    pub fn apply_gate(&mut self, gate: &Gate) {
        let m = gate_matrix(gate.kind);
        let n = self.n_qubits;
        match gate.qubits.len() {
            1 => {
                let mask = 1usize << (n - 1 - gate.qubits[0]);
                for idx in 0..self.amps.len() {
                    if idx & mask != 0 {
                        continue;
                    }
                    let (a0, a1) = (self.amps[idx], self.amps[idx | mask]);
                    self.amps[idx] = m[0] * a0 + m[1] * a1;
                    self.amps[idx | mask] = m[2] * a0 + m[3] * a1;
                }
            }
            2 => {
                // First listed qubit is the high bit of the 4x4 matrix index.
                let hi = 1usize << (n - 1 - gate.qubits[0]);
                let lo = 1usize << (n - 1 - gate.qubits[1]);
                for idx in 0..self.amps.len() {
                    if idx & hi != 0 || idx & lo != 0 {
                        continue;
                    }
                    let slots = [idx, idx | lo, idx | hi, idx | hi | lo];
                    let old = slots.map(|s| self.amps[s]);
                    for (r, &slot) in slots.iter().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (c, &o) in old.iter().enumerate() {
                            acc += m[r * 4 + c] * o;
                        }
                        self.amps[slot] = acc;
                    }
                }
            }
            _ => unreachable!("gates act on one or two qubits"),
        }
    }
}

/// Runs the whole circuit from the all-zeros state.
pub fn evolve(circuit: &Circuit) -> Result<StateVector, OracleError> {
    let mut sv = StateVector::zero_state(circuit.n_qubits())?;
    for gate in circuit.gates() {
        sv.apply_gate(gate);
    }
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_random_circuit, parse};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state_is_normalized_basis_state() {
        let sv = StateVector::zero_state(3).unwrap();
        assert!((sv.norm() - 1.0).abs() < 1e-12);
        assert_eq!(sv.amplitude_of(&[false, false, false]), c(1.0, 0.0));
        assert_eq!(sv.amplitude_of(&[false, true, false]), c(0.0, 0.0));
    }

    #[test]
    fn qubit_limit_is_enforced() {
        assert!(StateVector::zero_state(20).is_ok());
        assert_eq!(
            StateVector::zero_state(21).unwrap_err(),
            OracleError::TooManyQubits { n: 21, limit: 20 }
        );
    }

    #[test]
    fn hadamard_makes_equal_superposition() {
        let sv = evolve(&parse("1\n1 h 0\n").unwrap()).unwrap();
        assert!((sv.amplitude_of(&[false]) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((sv.amplitude_of(&[true]) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn t_phases_only_the_one_component() {
        let sv = evolve(&parse("1\n1 h 0\n2 t 0\n").unwrap()).unwrap();
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((sv.amplitude_of(&[false]) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((sv.amplitude_of(&[true]) - phase * FRAC_1_SQRT_2).norm() < 1e-12);
    }

    #[test]
    fn cz_flips_the_11_sign_and_is_symmetric() {
        let fwd = evolve(&parse("2\n1 h 0\n1 h 1\n2 cz 0 1\n").unwrap()).unwrap();
        let rev = evolve(&parse("2\n1 h 0\n1 h 1\n2 cz 1 0\n").unwrap()).unwrap();
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (i, &e) in expect.iter().enumerate() {
            assert!((fwd.amps()[i] - c(e, 0.0)).norm() < 1e-12);
            assert!((fwd.amps()[i] - rev.amps()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn qubit_zero_is_the_most_significant_index_bit() {
        // X^1/2 twice on qubit 0 of three = X: state |100>, index 4.
        let sv = evolve(&parse("3\n1 x_1_2 0\n2 x_1_2 0\n").unwrap()).unwrap();
        assert!((sv.amps()[4] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((sv.amplitude_of(&[true, false, false]) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn evolution_stays_normalized_gate_by_gate() {
        for seed in 0..4 {
            let circuit = generate_random_circuit(3, 10, seed);
            let mut sv = StateVector::zero_state(9).unwrap();
            for gate in circuit.gates() {
                sv.apply_gate(gate);
                assert!(
                    (sv.norm() - 1.0).abs() < 1e-10,
                    "norm drifted after {gate:?}"
                );
            }
        }
    }
}
