//! Correlation tensors of the Bloch representation.
//!
//! A [`CorrTensor`] of order `M` stores `t_{a1..aM} = Tr(rho s_{a1} x ... x s_{aM})`
//! for `a_j` in `{1, 2, 3}` on a labeled subset of qubits. The
//! [`ExtendedTensor`] also admits the identity index `0` on every mode.
//!
//! Storage order is lexicographic over the index tuple with the last mode
//! varying fastest. The mode-`k` unfolding is a `3 x 3^(M-1)` matrix whose
//! row is `a_k - 1` and whose columns enumerate the remaining indices in the
//! same lexicographic order (original mode order, last varying fastest).

pub mod export;
pub mod symmetric;

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::numeric::{pairwise_sum_sq, pow3, pow4};
use crate::state::{qubit_bit, PauliMasks, QubitState};

/// Default largest register handled by the generic `3^N`-entry path.
pub const GENERIC_TENSOR_CAP: usize = 12;
/// Default largest register for the `4^N`-entry extended tensor.
pub const EXTENDED_TENSOR_CAP: usize = 10;
/// Slack on the `[-1, 1]` bound of tensor entries.
pub const ENTRY_SLACK: f64 = 1e-9;

/// Real tensor with every mode of dimension 3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrTensor {
    labels: Vec<usize>,
    entries: Vec<f64>,
}

/// Single-qubit Bloch vector `(s_x, s_y, s_z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Order-1 tensor holding this vector.
    pub fn to_tensor(&self, qubit: usize) -> CorrTensor {
        CorrTensor {
            labels: vec![qubit],
            entries: self.0.to_vec(),
        }
    }
}

fn check_cap(what: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::ResourceLimit {
            what,
            requested,
            cap,
        });
    }
    Ok(())
}

/// Masks for the string with `digits[j] + offset` on local position
/// `positions[j]` and identity elsewhere.
fn masks_for(num_qubits: usize, positions: &[usize], mut linear: usize, base: usize, offset: u8) -> PauliMasks {
    let mut masks = PauliMasks {
        flip: 0,
        sign: 0,
        y_count: 0,
    };
    for &q in positions.iter().rev() {
        let digit = (linear % base) as u8;
        linear /= base;
        masks.push(qubit_bit(num_qubits, q), digit + offset);
    }
    masks
}

fn validate_subset(num_qubits: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(contract("correlation tensor needs a nonempty qubit subset"));
    }
    let mut seen = vec![false; num_qubits + 1];
    for &q in subset {
        if q == 0 || q > num_qubits {
            return Err(contract(format!("qubit {q} outside 1..={num_qubits}")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(contract(format!("qubit {q} repeated in subset")));
        }
    }
    Ok(())
}

/// `T^{subset}` with the default cap of [`GENERIC_TENSOR_CAP`] qubits.
pub fn correlation_tensor<S: QubitState + ?Sized>(state: &S, subset: &[usize]) -> Result<CorrTensor> {
    correlation_tensor_capped(state, subset, GENERIC_TENSOR_CAP)
}

/// `T^(N)` over every qubit of the state.
pub fn full_correlation_tensor<S: QubitState + ?Sized>(state: &S) -> Result<CorrTensor> {
    let all: Vec<usize> = (1..=state.num_qubits()).collect();
    correlation_tensor(state, &all)
}

/// Each entry is an independent Pauli expectation, so the parallel map gives
/// the same array regardless of scheduling.
pub fn correlation_tensor_capped<S: QubitState + ?Sized>(
    state: &S,
    subset: &[usize],
    cap: usize,
) -> Result<CorrTensor> {
    let n = state.num_qubits();
    check_cap("generic correlation tensor", n, cap)?;
    validate_subset(n, subset)?;
    let entries = (0..pow3(subset.len()))
        .into_par_iter()
        .map(|idx| state.expectation_masks(masks_for(n, subset, idx, 3, 1)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CorrTensor {
        labels: subset.iter().map(|&q| state.label(q)).collect(),
        entries,
    })
}

/// Bloch vector of local qubit `k`.
pub fn bloch_vector<S: QubitState + ?Sized>(state: &S, k: usize) -> Result<BlochVector> {
    let t = correlation_tensor_capped(state, &[k], usize::MAX)?;
    Ok(BlochVector([t.entries[0], t.entries[1], t.entries[2]]))
}

/// Euclidean (Hilbert-Schmidt) norm of any tensor.
pub trait TensorNorm {
    fn entries(&self) -> &[f64];

    fn norm_sqr(&self) -> f64 {
        pairwise_sum_sq(self.entries())
    }

    fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// `sqrt(sum of squared entries)` with pairwise accumulation.
pub fn tensor_norm<T: TensorNorm + ?Sized>(t: &T) -> f64 {
    t.norm()
}

impl TensorNorm for CorrTensor {
    fn entries(&self) -> &[f64] {
        &self.entries
    }
}

impl CorrTensor {
    pub fn from_entries(labels: Vec<usize>, entries: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(contract("a tensor needs at least one mode"));
        }
        if entries.len() != pow3(labels.len()) {
            return Err(contract(format!(
                "order-{} tensor needs {} entries, got {}",
                labels.len(),
                pow3(labels.len()),
                entries.len()
            )));
        }
        Ok(Self { labels, entries })
    }

    pub fn zeros(labels: Vec<usize>) -> Result<Self> {
        let len = pow3(labels.len());
        Self::from_entries(labels, vec![0.0; len])
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Linear offset of an index tuple with entries in `1..=3`.
    pub fn offset(&self, index: &[u8]) -> Result<usize> {
        if index.len() != self.order() {
            return Err(contract("index tuple length differs from tensor order"));
        }
        index.iter().try_fold(0usize, |acc, &a| {
            if !(1..=3).contains(&a) {
                return Err(contract(format!("tensor index {a} outside 1..=3")));
            }
            Ok(acc * 3 + (a - 1) as usize)
        })
    }

    pub fn get(&self, index: &[u8]) -> Result<f64> {
        Ok(self.entries[self.offset(index)?])
    }

    /// Index tuple (values in `1..=3`) for a linear offset.
    pub fn index_of(&self, mut offset: usize) -> Vec<u8> {
        let mut idx = vec![0u8; self.order()];
        for slot in idx.iter_mut().rev() {
            *slot = (offset % 3) as u8 + 1;
            offset /= 3;
        }
        idx
    }

    pub fn max_abs_diff(&self, other: &CorrTensor) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.order() {
            return Err(contract(format!(
                "mode {mode} outside 1..={}",
                self.order()
            )));
        }
        Ok(())
    }

    /// Mode-`k` matrix unfolding, `3 x 3^(M-1)`.
    pub fn unfold(&self, mode: usize) -> Result<DMatrix<f64>> {
        self.check_mode(mode)?;
        let stride = pow3(self.order() - mode);
        let cols = pow3(self.order() - 1);
        let mut out = DMatrix::zeros(3, cols);
        for (idx, &v) in self.entries.iter().enumerate() {
            let (row, col) = split_offset(idx, stride);
            out[(row, col)] = v;
        }
        Ok(out)
    }

    /// Inverse of [`CorrTensor::unfold`].
    pub fn fold(labels: Vec<usize>, mode: usize, matrix: &DMatrix<f64>) -> Result<Self> {
        let mut t = Self::zeros(labels)?;
        t.check_mode(mode)?;
        if matrix.nrows() != 3 || matrix.ncols() != pow3(t.order() - 1) {
            return Err(contract("unfolding has the wrong shape for this tensor"));
        }
        let stride = pow3(t.order() - mode);
        for (idx, slot) in t.entries.iter_mut().enumerate() {
            let (row, col) = split_offset(idx, stride);
            *slot = matrix[(row, col)];
        }
        Ok(t)
    }

    /// `T x_k M`: every mode-`k` fiber is multiplied by `matrix`.
    pub fn mode_product(&self, matrix: &Matrix3<f64>, mode: usize) -> Result<Self> {
        let unfolded = self.unfold(mode)?;
        let m = DMatrix::from_fn(3, 3, |r, c| matrix[(r, c)]);
        Self::fold(self.labels.clone(), mode, &(m * unfolded))
    }

    /// Outer product `A o B`. The labels of `B` are appended; when they clash
    /// with labels of `A` they are shifted past the largest label of `A`.
    pub fn outer(&self, other: &CorrTensor) -> CorrTensor {
        let clash = other.labels.iter().any(|l| self.labels.contains(l));
        let shift = if clash {
            self.labels.iter().copied().max().unwrap_or(0)
        } else {
            0
        };
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| l + shift));
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            entries.extend(other.entries.iter().map(|b| a * b));
        }
        CorrTensor { labels, entries }
    }

    /// Outer product of Bloch vectors, qubits labeled `1..=N`.
    pub fn from_bloch_vectors(vectors: &[BlochVector]) -> Result<Self> {
        let (first, rest) = vectors
            .split_first()
            .ok_or_else(|| contract("need at least one Bloch vector"))?;
        let mut t = first.to_tensor(1);
        for (i, v) in rest.iter().enumerate() {
            t = t.outer(&v.to_tensor(i + 2));
        }
        Ok(t)
    }
}

/// Splits a linear offset into (digit of the unfolded mode, column index).
#[inline]
fn split_offset(idx: usize, stride: usize) -> (usize, usize) {
    let row = (idx / stride) % 3;
    let high = idx / (stride * 3);
    let low = idx % stride;
    (row, high * stride + low)
}

/// Real tensor with every mode of dimension 4 (identity index included).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedTensor {
    order: usize,
    entries: Vec<f64>,
}

impl TensorNorm for ExtendedTensor {
    fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Every `Tr(rho s_{i1} x ... x s_{iN})` with `i_k` in `{0,1,2,3}`, capped at
/// [`EXTENDED_TENSOR_CAP`] qubits.
pub fn extended_tensor<S: QubitState + ?Sized>(state: &S) -> Result<ExtendedTensor> {
    extended_tensor_capped(state, EXTENDED_TENSOR_CAP)
}

pub fn extended_tensor_capped<S: QubitState + ?Sized>(state: &S, cap: usize) -> Result<ExtendedTensor> {
    let n = state.num_qubits();
    check_cap("extended correlation tensor", n, cap)?;
    let positions: Vec<usize> = (1..=n).collect();
    let mut entries = (0..pow4(n))
        .into_par_iter()
        .map(|idx| state.expectation_masks(masks_for(n, &positions, idx, 4, 0)))
        .collect::<Result<Vec<f64>>>()?;
    // the all-identity entry is the trace
    entries[0] = 1.0;
    Ok(ExtendedTensor { order: n, entries })
}

impl ExtendedTensor {
    pub fn from_entries(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 || entries.len() != pow4(order) {
            return Err(contract("extended tensor needs 4^order entries"));
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, index: &[u8]) -> Result<f64> {
        if index.len() != self.order {
            return Err(contract("index tuple length differs from tensor order"));
        }
        let off = index.iter().try_fold(0usize, |acc, &i| {
            if i > 3 {
                return Err(contract(format!("extended index {i} outside 0..=3")));
            }
            Ok(acc * 4 + i as usize)
        })?;
        Ok(self.entries[off])
    }

    /// The block with nonzero indices on exactly the qubits of `subset`
    /// (ascending, 1-based) and identity elsewhere.
    pub fn block(&self, subset: &[usize]) -> Result<CorrTensor> {
        validate_subset(self.order, subset)?;
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(contract("block subset must be ascending"));
        }
        let m = subset.len();
        let entries = (0..pow3(m))
            .map(|lin| {
                let mut idx = vec![0u8; self.order];
                let mut rest = lin;
                for &q in subset.iter().rev() {
                    idx[q - 1] = (rest % 3) as u8 + 1;
                    rest /= 3;
                }
                self.get(&idx)
            })
            .collect::<Result<Vec<_>>>()?;
        CorrTensor::from_entries(subset.to_vec(), entries)
    }

    /// The all-nonzero block, `T^(N)`.
    pub fn correlation_block(&self) -> CorrTensor {
        let all: Vec<usize> = (1..=self.order).collect();
        self.block(&all).expect("full subset is valid")
    }

    pub fn bloch_vector(&self, qubit: usize) -> Result<BlochVector> {
        let t = self.block(&[qubit])?;
        Ok(BlochVector([t.entries[0], t.entries[1], t.entries[2]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;
    use num_complex::Complex64 as C64;

    fn ghz(n: usize) -> PureState {
        let mut a = vec![0.0; 1 << n];
        a[0] = 1.0;
        a[(1 << n) - 1] = 1.0;
        PureState::from_real(n, &a).unwrap()
    }

    fn w(n: usize) -> PureState {
        let mut a = vec![0.0; 1 << n];
        for j in 0..n {
            a[1 << j] = 1.0;
        }
        PureState::from_real(n, &a).unwrap()
    }

    #[test]
    fn bloch_vectors_of_simple_states() {
        let zero = PureState::basis(1, 0).unwrap();
        assert_eq!(bloch_vector(&zero, 1).unwrap().0, [0.0, 0.0, 1.0]);
        let plus = PureState::from_real(1, &[1.0, 1.0]).unwrap();
        let s = bloch_vector(&plus, 1).unwrap().0;
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12 && s[2].abs() < 1e-12);
        let s = bloch_vector(&ghz(2), 1).unwrap();
        assert!(s.norm() < 1e-12);
        assert!(bloch_vector(&ghz(2), 3).is_err());
    }

    #[test]
    fn product_zero_zero_has_single_zz_entry() {
        let t = full_correlation_tensor(&PureState::basis(2, 0).unwrap()).unwrap();
        for (i, &v) in t.entries().iter().enumerate() {
            let want = if t.index_of(i) == vec![3, 3] { 1.0 } else { 0.0 };
            assert_eq!(v, want);
        }
    }

    #[test]
    fn w3_entries() {
        let t = full_correlation_tensor(&w(3)).unwrap();
        let close = |idx: &[u8], want: f64| assert!((t.get(idx).unwrap() - want).abs() < 1e-12);
        close(&[3, 3, 3], -1.0);
        for idx in [[3, 1, 1], [1, 3, 1], [1, 1, 3], [3, 2, 2], [2, 3, 2], [2, 2, 3]] {
            close(&idx, 2.0 / 3.0);
        }
        assert!((t.norm() - (11.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ghz_zz_entry_follows_parity() {
        for n in 2..=5 {
            for p in [0.2, 0.5, 0.9] {
                let s = PureState::from_real(
                    n,
                    &(0..1 << n)
                        .map(|x| {
                            if x == 0 {
                                f64::sqrt(p)
                            } else if x == (1 << n) - 1 {
                                f64::sqrt(1.0 - p)
                            } else {
                                0.0
                            }
                        })
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let t = full_correlation_tensor(&s).unwrap();
                let want = p + (-1f64).powi(n as i32) * (1.0 - p);
                assert!((t.get(&vec![3; n]).unwrap() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tensor_norm_values() {
        let zero = CorrTensor::zeros(vec![1, 2]).unwrap();
        assert_eq!(tensor_norm(&zero), 0.0);
        let t = full_correlation_tensor(&ghz(3)).unwrap();
        assert!((tensor_norm(&t) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unfold_order_two_is_matrix() {
        let entries: Vec<f64> = (0..9).map(|v| v as f64).collect();
        let t = CorrTensor::from_entries(vec![1, 2], entries).unwrap();
        let m = t.unfold(1).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m[(r, c)], (3 * r + c) as f64);
            }
        }
        assert_eq!(t.unfold(2).unwrap(), m.transpose());
        assert!(t.unfold(0).is_err());
        assert!(t.unfold(3).is_err());
    }

    #[test]
    fn mode_product_examples() {
        let t = full_correlation_tensor(&w(3)).unwrap();
        let same = t.mode_product(&Matrix3::identity(), 2).unwrap();
        assert_eq!(same, t);
        let half = t.mode_product(&(Matrix3::identity() * 0.5), 1).unwrap();
        assert!((half.norm() - 0.5 * t.norm()).abs() < 1e-14);
        assert!(t.mode_product(&Matrix3::identity(), 4).is_err());
    }

    #[test]
    fn outer_of_z_vectors() {
        let z = BlochVector([0.0, 0.0, 1.0]);
        let t = CorrTensor::from_bloch_vectors(&[z, z]).unwrap();
        assert_eq!(t.labels(), &[1, 2]);
        assert_eq!(t.get(&[3, 3]).unwrap(), 1.0);
        assert_eq!(t.entries().iter().filter(|v| **v != 0.0).count(), 1);
        // clashing labels are shifted
        let u = z.to_tensor(1).outer(&z.to_tensor(1));
        assert_eq!(u.labels(), &[1, 2]);
    }

    #[test]
    fn extended_tensor_of_zero() {
        let e = extended_tensor(&PureState::basis(1, 0).unwrap()).unwrap();
        assert_eq!(e.entries(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn extended_tensor_of_bell_pair() {
        let e = extended_tensor(&ghz(2)).unwrap();
        assert!(e.bloch_vector(1).unwrap().norm() < 1e-12);
        assert!(e.bloch_vector(2).unwrap().norm() < 1e-12);
        let t = e.correlation_block();
        // Bell pair: diag(1, -1, 1)
        let want = [1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
        for (a, b) in t.entries().iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((e.norm_sqr() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn extended_tensor_respects_cap() {
        let s = PureState::basis(3, 0).unwrap();
        assert!(matches!(
            extended_tensor_capped(&s, 2),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            correlation_tensor_capped(&s, &[1, 2, 3], 2),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn subset_tensor_of_density_matrix_carries_labels() {
        let rho = crate::state::partial_trace(&w(4), &[2, 4]).unwrap();
        let t = correlation_tensor(&rho, &[1, 2]).unwrap();
        assert_eq!(t.labels(), &[2, 4]);
        let direct = correlation_tensor(&w(4), &[2, 4]).unwrap();
        assert!(t.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn complex_phase_state_has_real_entries() {
        let s = PureState::new(
            1,
            vec![C64::new(0.6, 0.0), C64::from_polar(0.8, 0.3)],
        )
        .unwrap();
        let b = bloch_vector(&s, 1).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-12);
    }
}
