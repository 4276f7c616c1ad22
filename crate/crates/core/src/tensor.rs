//! Dense tensors over binary variables and the single-variable contraction
//! primitive used by bucket elimination.
//!
//! A tensor is addressed row-major by its variable list: the first variable
//! owns the most significant index bit. All variables are binary, so a tensor
//! over k variables holds 2^k complex entries.

use num_complex::Complex64;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    vars: Vec<usize>,
    data: Vec<Complex64>,
}

impl DenseTensor {
    pub fn new(vars: Vec<usize>, data: Vec<Complex64>) -> Self {
        let distinct: BTreeSet<usize> = vars.iter().copied().collect();
        assert_eq!(distinct.len(), vars.len(), "tensor variables must be distinct");
        assert_eq!(data.len(), 1 << vars.len(), "data length must be 2^order");
        DenseTensor { vars, data }
    }

    pub fn scalar(value: Complex64) -> Self {
        DenseTensor {
            vars: Vec::new(),
            data: vec![value],
        }
    }

    /// Number of variables (the tensor's order).
    pub fn order(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Number of stored elements, `2^order`.
    pub fn size(&self) -> usize {
        self.data.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn scalar_value(&self) -> Complex64 {
        assert!(self.is_scalar(), "tensor still has variables {:?}", self.vars);
        self.data[0]
    }

    /// Distance in flat index space between entries that differ only in the
    /// given variable's bit.
    fn stride_of(&self, var: usize) -> Option<usize> {
        let pos = self.vars.iter().position(|&v| v == var)?;
        Some(1 << (self.vars.len() - 1 - pos))
    }
}

/// Flat offset of each tensor for a given assignment of `out_vars`, plus the
/// stride its summed/free variable contributes.
fn alignment(tensor: &DenseTensor, out_vars: &[usize]) -> Vec<usize> {
    out_vars
        .iter()
        .map(|&v| tensor.stride_of(v).unwrap_or(0))
        .collect()
}

fn offset(strides: &[usize], idx: usize, width: usize) -> usize {
    let mut off = 0;
    for (p, &s) in strides.iter().enumerate() {
        if (idx >> (width - 1 - p)) & 1 == 1 {
            off += s;
        }
    }
    off
}

/// Contracts (sums) the given tensors over one shared variable.
///
/// Every input must be indexed by `var`. The result ranges over the union of
/// the remaining variables in ascending id order; contracting tensors whose
/// only variable is `var` yields a scalar.
pub fn contract_over(tensors: &[DenseTensor], var: usize) -> DenseTensor {
    assert!(!tensors.is_empty(), "nothing to contract");
    let mut union: BTreeSet<usize> = BTreeSet::new();
    for t in tensors {
        assert!(
            t.vars.contains(&var),
            "tensor over {:?} is not indexed by {var}",
            t.vars
        );
        union.extend(t.vars.iter().copied());
    }
    union.remove(&var);
    let out_vars: Vec<usize> = union.into_iter().collect();
    let width = out_vars.len();

    let aligns: Vec<Vec<usize>> = tensors.iter().map(|t| alignment(t, &out_vars)).collect();
    let var_strides: Vec<usize> = tensors
        .iter()
        .map(|t| t.stride_of(var).expect("checked above"))
        .collect();

    let mut data = vec![Complex64::new(0.0, 0.0); 1 << width];
    for (idx, slot) in data.iter_mut().enumerate() {
        for s in 0..2usize {
            let mut term = Complex64::new(1.0, 0.0);
            for (t, tensor) in tensors.iter().enumerate() {
                let off = offset(&aligns[t], idx, width) + s * var_strides[t];
                term *= tensor.data[off];
            }
            *slot += term;
        }
    }
    DenseTensor::new(out_vars, data)
}

/// Pointwise product of tensors broadcast over `out_vars` (no summation).
///
/// Every input's variables must be a subset of `out_vars`; the result is laid
/// out over `out_vars` in the order given. An empty input list yields the
/// all-ones tensor.
pub fn pointwise_product(tensors: &[DenseTensor], out_vars: &[usize]) -> DenseTensor {
    for t in tensors {
        for v in &t.vars {
            assert!(out_vars.contains(v), "variable {v} missing from output");
        }
    }
    let width = out_vars.len();
    let aligns: Vec<Vec<usize>> = tensors.iter().map(|t| alignment(t, out_vars)).collect();
    let mut data = vec![Complex64::new(1.0, 0.0); 1 << width];
    for (idx, slot) in data.iter_mut().enumerate() {
        for (t, tensor) in tensors.iter().enumerate() {
            *slot *= tensor.data[offset(&aligns[t], idx, width)];
        }
    }
    DenseTensor::new(out_vars.to_vec(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_tensor(vars: Vec<usize>, rng: &mut ChaCha8Rng) -> DenseTensor {
        let data = (0..1usize << vars.len())
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        DenseTensor::new(vars, data)
    }

    /// Independent reference: enumerate full joint assignments and sum.
    fn naive_contract(tensors: &[DenseTensor], var: usize) -> DenseTensor {
        let mut union: BTreeSet<usize> = BTreeSet::new();
        for t in tensors {
            union.extend(t.vars().iter().copied());
        }
        let all: Vec<usize> = union.iter().copied().collect();
        let out_vars: Vec<usize> = all.iter().copied().filter(|&v| v != var).collect();
        let mut data = vec![c(0.0, 0.0); 1 << out_vars.len()];
        for joint in 0..1usize << all.len() {
            let bit = |v: usize| {
                let p = all.iter().position(|&x| x == v).unwrap();
                (joint >> (all.len() - 1 - p)) & 1
            };
            let mut term = c(1.0, 0.0);
            for t in tensors {
                let mut off = 0;
                for (p, &v) in t.vars().iter().enumerate() {
                    off += bit(v) << (t.vars().len() - 1 - p);
                }
                term *= t.data()[off];
            }
            let mut out_idx = 0;
            for (p, &v) in out_vars.iter().enumerate() {
                out_idx += bit(v) << (out_vars.len() - 1 - p);
            }
            data[out_idx] += term;
        }
        DenseTensor::new(out_vars, data)
    }

    fn assert_close(a: &DenseTensor, b: &DenseTensor) {
        assert_eq!(a.vars(), b.vars());
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).norm() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn contracting_vector_with_matrix_selects_a_row() {
        let basis0 = DenseTensor::new(vec![0], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let h = DenseTensor::new(
            vec![0, 1],
            crate::circuit::gate_tensor(crate::circuit::GateKind::H),
        );
        let out = contract_over(&[basis0, h], 0);
        assert_eq!(out.vars(), &[1]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.data()[0] - c(r, 0.0)).norm() < 1e-12);
        assert!((out.data()[1] - c(r, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pair_contraction_matches_naive_reference() {
        // Two order-3 tensors sharing the summed variable and one more:
        // the classic A(i,j,l) * B(j,k,l) summed over l.
        let (i, j, k, l) = (0, 1, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_tensor(vec![i, j, l], &mut rng);
        let b = random_tensor(vec![j, k, l], &mut rng);
        let out = contract_over(&[a.clone(), b.clone()], l);
        assert_eq!(out.vars(), &[i, j, k]);
        assert_close(&out, &naive_contract(&[a, b], l));
    }

    #[test]
    fn multiway_contractions_match_naive_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..40 {
            let n_vars = rng.gen_range(1..5usize);
            let shared = 0usize;
            let n_tensors = rng.gen_range(1..4usize);
            let tensors: Vec<DenseTensor> = (0..n_tensors)
                .map(|_| {
                    let mut vars = vec![shared];
                    for v in 1..n_vars {
                        if rng.gen_bool(0.6) {
                            vars.push(v);
                        }
                    }
                    random_tensor(vars, &mut rng)
                })
                .collect();
            let got = contract_over(&tensors, shared);
            let want = naive_contract(&tensors, shared);
            assert_close(&got, &want);
            assert!(got.order() <= n_vars - 1, "case {case}");
        }
    }

    #[test]
    fn contraction_to_scalar() {
        let v = DenseTensor::new(vec![7], vec![c(0.25, 0.0), c(0.0, -2.0)]);
        let w = DenseTensor::new(vec![7], vec![c(4.0, 0.0), c(0.0, 1.0)]);
        let out = contract_over(&[v, w], 7);
        assert!(out.is_scalar());
        // 0.25*4 + (-2i)(i) = 1 + 2 = 3.
        assert!((out.scalar_value() - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pointwise_product_broadcasts_and_orders_output() {
        let t1 = DenseTensor::new(vec![2], vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let t2 = DenseTensor::new(vec![5], vec![c(3.0, 0.0), c(4.0, 0.0)]);
        // Note out_vars not in ascending id order: 5 is the high bit.
        let out = pointwise_product(&[t1, t2], &[5, 2]);
        assert_eq!(out.vars(), &[5, 2]);
        let got: Vec<f64> = out.data().iter().map(|z| z.re).collect();
        // index = (bit of 5)(bit of 2): 00 -> 3*1, 01 -> 3*2, 10 -> 4*1, 11 -> 4*2.
        assert_eq!(got, vec![3.0, 6.0, 4.0, 8.0]);
    }

    #[test]
    fn empty_product_is_all_ones() {
        let out = pointwise_product(&[], &[1, 2]);
        assert!(out.data().iter().all(|z| (z - c(1.0, 0.0)).norm() == 0.0));
    }

    #[test]
    #[should_panic]
    fn contract_requires_var_in_every_tensor() {
        let t1 = DenseTensor::new(vec![0], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let t2 = DenseTensor::new(vec![1], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        contract_over(&[t1, t2], 0);
    }
}
