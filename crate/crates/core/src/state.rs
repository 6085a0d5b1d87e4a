//! N-qubit pure states, reduced density matrices, Pauli strings and local
//! operators.
//!
//! Basis convention: qubit 1 is the leftmost tensor factor, i.e. the most
//! significant bit of the basis index. Qubit `k` of an `n`-qubit register
//! therefore lives at bit `n - k`.
//!
//! Pauli strings are never expanded into `2^N x 2^N` matrices. A string acts on
//! a basis state as `P|x> = i^{#Y} (-1)^{popcount(x & (Y|Z))} |x ^ (X|Y)>`, so
//! an expectation value is a single pass over the amplitudes.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::numeric::pairwise_norm_sqr;

/// Normalization tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity / trace / positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Largest imaginary residue accepted on a Hermitian expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;
/// Unitarity, normality and completeness tolerance for local operators.
pub const OPERATOR_TOL: f64 = 1e-10;
/// Outcomes at or below this probability carry no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn qubit_bit(num_qubits: usize, qubit: usize) -> usize {
    1usize << (num_qubits - qubit)
}

fn check_qubit(num_qubits: usize, qubit: usize) -> Result<()> {
    if qubit == 0 || qubit > num_qubits {
        return Err(contract(format!(
            "qubit index {qubit} outside 1..={num_qubits}"
        )));
    }
    Ok(())
}

/// Normalized state vector of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting wrong lengths and vectors whose
    /// squared norm is off by more than [`NORM_TOL`].
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_len(num_qubits, amplitudes.len())?;
        let norm_sqr = pairwise_norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(contract(format!(
                "state is not normalized (|psi|^2 = {norm_sqr})"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn from_unnormalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_len(num_qubits, amplitudes.len())?;
        let norm = pairwise_norm_sqr(&amplitudes).sqrt();
        if norm <= f64::MIN_POSITIVE || !norm.is_finite() {
            return Err(contract("cannot normalize a zero or non-finite vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Real amplitudes, normalized on the way in.
    pub fn from_real(num_qubits: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::from_unnormalized(
            num_qubits,
            amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect(),
        )
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::check_len(num_qubits, 1 << num_qubits.min(31))?;
        if index >= 1 << num_qubits {
            return Err(contract(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Product state built from single-qubit states, qubit 1 first.
    pub fn product(factors: &[[C64; 2]]) -> Result<Self> {
        if factors.is_empty() {
            return Err(contract("product of zero factors"));
        }
        let mut amps = vec![ONE];
        for f in factors {
            let mut next = Vec::with_capacity(amps.len() * 2);
            for a in &amps {
                next.push(a * f[0]);
                next.push(a * f[1]);
            }
            amps = next;
        }
        Self::from_unnormalized(factors.len(), amps)
    }

    fn check_len(num_qubits: usize, len: usize) -> Result<()> {
        if num_qubits == 0 {
            return Err(contract("a state needs at least one qubit"));
        }
        if num_qubits > 30 {
            return Err(Error::ResourceLimit {
                what: "dense state vector",
                requested: num_qubits,
                cap: 30,
            });
        }
        if len != 1 << num_qubits {
            return Err(contract(format!(
                "expected {} amplitudes for {num_qubits} qubits, got {len}",
                1usize << num_qubits
            )));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(contract("inner product of states with different sizes"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self> (x) |other>`; the qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        PureState::from_unnormalized(self.num_qubits + other.num_qubits, amps)
    }

    /// The same state with qubits `i` and `j` exchanged.
    pub fn swap_qubits(&self, i: usize, j: usize) -> Result<PureState> {
        check_qubit(self.num_qubits, i)?;
        check_qubit(self.num_qubits, j)?;
        let bi = qubit_bit(self.num_qubits, i);
        let bj = qubit_bit(self.num_qubits, j);
        let amps = (0..self.dim())
            .map(|x| {
                let xi = x & bi != 0;
                let xj = x & bj != 0;
                let src = if xi == xj { x } else { x ^ bi ^ bj };
                self.amplitudes[src]
            })
            .collect();
        Ok(PureState {
            num_qubits: self.num_qubits,
            amplitudes: amps,
        })
    }

    /// Largest elementwise deviation between two amplitude vectors.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A Pauli string over `{I, X, Y, Z}` encoded as `{0, 1, 2, 3}`, qubit 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    labels: Vec<u8>,
}

/// Bit masks describing how a Pauli string acts on basis states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliMasks {
    /// Bits flipped by X or Y.
    pub flip: usize,
    /// Bits contributing a `(-1)^bit` sign (Y or Z).
    pub sign: usize,
    /// Number of Y factors; the global phase is `i^y_count`.
    pub y_count: u32,
}

impl PauliMasks {
    pub(crate) fn push(&mut self, bit: usize, label: u8) {
        match label {
            1 => self.flip |= bit,
            2 => {
                self.flip |= bit;
                self.sign |= bit;
                self.y_count += 1;
            }
            3 => self.sign |= bit,
            _ => {}
        }
    }
}

impl PauliString {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if labels.is_empty() {
            return Err(contract("empty Pauli string"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 3) {
            return Err(contract(format!("Pauli label {bad} outside 0..=3")));
        }
        Ok(Self { labels })
    }

    /// Parses strings like `"XIZY"` (also accepts digits `0123`).
    pub fn parse(text: &str) -> Result<Self> {
        let labels = text
            .chars()
            .map(|c| match c {
                'I' | 'i' | '0' => Ok(0),
                'X' | 'x' | '1' => Ok(1),
                'Y' | 'y' | '2' => Ok(2),
                'Z' | 'z' | '3' => Ok(3),
                other => Err(contract(format!("unknown Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn masks(&self) -> PauliMasks {
        let n = self.labels.len();
        let mut m = PauliMasks {
            flip: 0,
            sign: 0,
            y_count: 0,
        };
        for (k, &l) in self.labels.iter().enumerate() {
            m.push(qubit_bit(n, k + 1), l);
        }
        m
    }
}

#[inline]
fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

fn finish_expectation(raw: C64) -> Result<f64> {
    if raw.im.abs() >= IMAG_RESIDUE_TOL {
        return Err(Error::NumericalIntegrity {
            residue: raw.im.abs(),
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    Ok(raw.re)
}

/// Anything a Pauli expectation and a partial trace can be taken of.
pub trait QubitState: Sync {
    fn num_qubits(&self) -> usize;

    /// Global qubit label of local position `k` (1-based).
    fn label(&self, position: usize) -> usize;

    /// `Tr(rho P)` for the string described by `masks`.
    fn expectation_masks(&self, masks: PauliMasks) -> Result<f64>;

    /// Reduced state on the given local positions, in the order given.
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix>;
}

/// `Tr(rho P)`. Errors when the string length does not match the state or the
/// raw inner product has an imaginary part of 1e-9 or more.
pub fn pauli_expectation<S: QubitState + ?Sized>(state: &S, p: &PauliString) -> Result<f64> {
    if p.len() != state.num_qubits() {
        return Err(contract(format!(
            "Pauli string of length {} applied to {} qubits",
            p.len(),
            state.num_qubits()
        )));
    }
    state.expectation_masks(p.masks())
}

/// Reduced density matrix on `keep` (1-based positions, distinct).
pub fn partial_trace<S: QubitState + ?Sized>(state: &S, keep: &[usize]) -> Result<DensityMatrix> {
    state.reduce(keep)
}

/// Offsets that scatter the bits of a kept-register index and an environment
/// index back into a full basis index.
struct SplitIndex {
    kept: Vec<usize>,
    env: Vec<usize>,
}

impl SplitIndex {
    fn new(num_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(contract("partial trace must keep at least one qubit"));
        }
        let mut seen = vec![false; num_qubits + 1];
        for &k in keep {
            check_qubit(num_qubits, k)?;
            if seen[k] {
                return Err(contract(format!("qubit {k} listed twice in keep set")));
            }
            seen[k] = true;
        }
        let env_qubits: Vec<usize> = (1..=num_qubits).filter(|&q| !seen[q]).collect();
        Ok(Self {
            kept: scatter_table(num_qubits, keep),
            env: scatter_table(num_qubits, &env_qubits),
        })
    }
}

/// Entry `a` holds the full-register index whose bits on `qubits` spell `a`
/// (first listed qubit = most significant bit of `a`) and are zero elsewhere.
fn scatter_table(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let m = qubits.len();
    (0..1usize << m)
        .map(|a| {
            qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if a & (1 << (m - 1 - pos)) != 0 {
                    acc | qubit_bit(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect()
}

impl QubitState for PureState {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn label(&self, position: usize) -> usize {
        position
    }

    fn expectation_masks(&self, masks: PauliMasks) -> Result<f64> {
        let amps = &self.amplitudes;
        let mut acc = ZERO;
        for (x, a) in amps.iter().enumerate() {
            let term = amps[x ^ masks.flip].conj() * a;
            if (x & masks.sign).count_ones() & 1 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        finish_expectation(acc * i_pow(masks.y_count))
    }

    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = SplitIndex::new(self.num_qubits, keep)?;
        let dim = split.kept.len();
        let mut data = vec![ZERO; dim * dim];
        for (r, &kr) in split.kept.iter().enumerate() {
            for (c, &kc) in split.kept.iter().enumerate().skip(r) {
                let v: C64 = split
                    .env
                    .iter()
                    .map(|&e| self.amplitudes[kr | e] * self.amplitudes[kc | e].conj())
                    .sum();
                data[r * dim + c] = v;
                data[c * dim + r] = v.conj();
            }
        }
        DensityMatrix::new(keep.to_vec(), data)
    }
}

/// Density operator on an ordered subset of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<usize>,
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all within 1e-10).
    pub fn new(labels: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let rho = Self::unchecked(labels, data)?;
        rho.validate()?;
        Ok(rho)
    }

    fn unchecked(labels: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidDensityMatrix("no qubit labels".into()));
        }
        if labels.len() > 14 {
            return Err(Error::ResourceLimit {
                what: "density matrix",
                requested: labels.len(),
                cap: 14,
            });
        }
        let dim = 1usize << labels.len();
        if data.len() != dim * dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "{} entries for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(Self { labels, dim, data })
    }

    /// Labels default to `1..=M`.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensityMatrix(format!(
                "dimension {dim} is not a power of two >= 2"
            )));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        let m = dim.trailing_zeros() as usize;
        Self::new((1..=m).collect(), rows.into_iter().flatten().collect())
    }

    pub fn from_pure(state: &PureState) -> Self {
        let dim = state.dim();
        let a = state.amplitudes();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(a[r] * a[c].conj());
            }
        }
        Self {
            labels: (1..=state.num_qubits()).collect(),
            dim,
            data,
        }
    }

    /// `sum_i w_i rho_i`; all inputs must share labels, weights must be a
    /// probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(contract("mixture needs one weight per state"));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-10
        {
            return Err(contract("mixture weights must be a probability vector"));
        }
        let first = &states[0];
        if states.iter().any(|s| s.labels != first.labels) {
            return Err(contract("mixture of states on different qubits"));
        }
        let mut data = vec![ZERO; first.data.len()];
        for (w, s) in weights.iter().zip(states) {
            for (d, v) in data.iter_mut().zip(&s.data) {
                *d += v * *w;
            }
        }
        Self::new(first.labels.clone(), data)
    }

    /// Ensemble `sum_i p_i |psi_i><psi_i|`.
    pub fn from_ensemble(weights: &[f64], states: &[PureState]) -> Result<Self> {
        let rhos: Vec<_> = states.iter().map(DensityMatrix::from_pure).collect();
        Self::mixture(weights, &rhos)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        let mut herm = 0.0f64;
        for r in 0..d {
            for c in r..d {
                herm = herm.max((self.data[r * d + c] - self.data[c * d + r].conj()).norm());
            }
        }
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let min_eig = self
            .eigen()
            .0
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Eigenvalues (ascending) with matching normalized eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<C64>>) {
        let eig = nalgebra::SymmetricEigen::new(self.to_matrix());
        let mut pairs: Vec<(f64, Vec<C64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, eig.eigenvectors.column(i).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    }

    /// Elementwise max-norm distance.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `U rho U^dagger` for a unitary acting on local position `op.qubit`.
    pub fn conjugate_local(&self, op: &LocalOperator) -> Result<DensityMatrix> {
        if op.kind != OperatorKind::Unitary {
            return Err(contract("conjugation requires a unitary operator"));
        }
        check_qubit(self.labels.len(), op.qubit)?;
        let n = self.labels.len();
        let bit = qubit_bit(n, op.qubit);
        let d = self.dim;
        let u = &op.matrix;
        // left multiply by U on rows, then by U^dagger on columns
        let mut tmp = self.data.clone();
        for c in 0..d {
            for r0 in (0..d).filter(|r| r & bit == 0) {
                let r1 = r0 | bit;
                let a0 = self.data[r0 * d + c];
                let a1 = self.data[r1 * d + c];
                tmp[r0 * d + c] = u[0][0] * a0 + u[0][1] * a1;
                tmp[r1 * d + c] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        let mut out = tmp.clone();
        for r in 0..d {
            for c0 in (0..d).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let a0 = tmp[r * d + c0];
                let a1 = tmp[r * d + c1];
                out[r * d + c0] = a0 * u[0][0].conj() + a1 * u[0][1].conj();
                out[r * d + c1] = a0 * u[1][0].conj() + a1 * u[1][1].conj();
            }
        }
        DensityMatrix::new(self.labels.clone(), out)
    }
}

impl QubitState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    fn label(&self, position: usize) -> usize {
        self.labels[position - 1]
    }

    fn expectation_masks(&self, masks: PauliMasks) -> Result<f64> {
        // Tr(rho P) = sum_x rho[x, x ^ flip] * phase(x)
        let d = self.dim;
        let mut acc = ZERO;
        for x in 0..d {
            let term = self.data[x * d + (x ^ masks.flip)];
            if (x & masks.sign).count_ones() & 1 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        finish_expectation(acc * i_pow(masks.y_count))
    }

    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = SplitIndex::new(self.labels.len(), keep)?;
        let dim = split.kept.len();
        let d = self.dim;
        let mut data = vec![ZERO; dim * dim];
        for (r, &kr) in split.kept.iter().enumerate() {
            for (c, &kc) in split.kept.iter().enumerate() {
                data[r * dim + c] = split
                    .env
                    .iter()
                    .map(|&e| self.data[(kr | e) * d + (kc | e)])
                    .sum();
            }
        }
        let labels = keep.iter().map(|&k| self.labels[k - 1]).collect();
        DensityMatrix::new(labels, data)
    }
}

/// Whether a [`LocalOperator`] is a unitary gate or a measurement (Kraus)
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Unitary,
    Kraus,
}

pub type Matrix2 = [[C64; 2]; 2];

/// A 2x2 operator acting on one qubit (1-based index).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub qubit: usize,
    pub matrix: Matrix2,
    pub kind: OperatorKind,
}

pub(crate) fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub(crate) fn adjoint(a: &Matrix2) -> Matrix2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn max_dev(a: &Matrix2, b: &Matrix2) -> f64 {
    let mut m = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            m = m.max((a[r][c] - b[r][c]).norm());
        }
    }
    m
}

pub(crate) const IDENTITY2: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];

impl LocalOperator {
    /// Checks `U U^dagger = I` within 1e-10.
    pub fn unitary(qubit: usize, matrix: Matrix2) -> Result<Self> {
        if qubit == 0 {
            return Err(contract("qubit indices start at 1"));
        }
        let dev = max_dev(&mat_mul(&matrix, &adjoint(&matrix)), &IDENTITY2);
        if dev > OPERATOR_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self {
            qubit,
            matrix,
            kind: OperatorKind::Unitary,
        })
    }

    /// Checks normality `[L, L^dagger] = 0` within 1e-10. Completeness is a
    /// property of the whole set, see [`KrausSet`].
    pub fn kraus(qubit: usize, matrix: Matrix2) -> Result<Self> {
        if qubit == 0 {
            return Err(contract("qubit indices start at 1"));
        }
        let adj = adjoint(&matrix);
        let dev = max_dev(&mat_mul(&matrix, &adj), &mat_mul(&adj, &matrix));
        if dev > OPERATOR_TOL {
            return Err(Error::NotNormal(dev));
        }
        Ok(Self {
            qubit,
            matrix,
            kind: OperatorKind::Kraus,
        })
    }

    pub fn pauli_x(qubit: usize) -> Self {
        Self {
            qubit,
            matrix: [[ZERO, ONE], [ONE, ZERO]],
            kind: OperatorKind::Unitary,
        }
    }

    pub fn hadamard(qubit: usize) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            qubit,
            matrix: [[h, h], [h, -h]],
            kind: OperatorKind::Unitary,
        }
    }

    /// `diag(1, e^{i phi})`.
    pub fn phase(qubit: usize, phi: f64) -> Self {
        Self {
            qubit,
            matrix: [[ONE, ZERO], [ZERO, C64::from_polar(1.0, phi)]],
            kind: OperatorKind::Unitary,
        }
    }

    fn apply_raw(&self, state: &PureState) -> Result<Vec<C64>> {
        check_qubit(state.num_qubits(), self.qubit)?;
        let bit = qubit_bit(state.num_qubits(), self.qubit);
        let m = &self.matrix;
        let mut out = state.amplitudes().to_vec();
        for x0 in (0..state.dim()).filter(|x| x & bit == 0) {
            let x1 = x0 | bit;
            let a0 = out[x0];
            let a1 = out[x1];
            out[x0] = m[0][0] * a0 + m[0][1] * a1;
            out[x1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(out)
    }
}

/// Applies a single-qubit unitary to its designated qubit.
pub fn apply_local_unitary(state: &PureState, op: &LocalOperator) -> Result<PureState> {
    if op.kind != OperatorKind::Unitary {
        return Err(contract("apply_local_unitary needs a unitary operator"));
    }
    let amps = op.apply_raw(state)?;
    Ok(PureState {
        num_qubits: state.num_qubits(),
        amplitudes: amps,
    })
}

/// Result of applying one Kraus element.
#[derive(Clone, Debug)]
pub struct KrausOutcome {
    pub probability: f64,
    pub post_state: PureState,
}

/// `p = ||L psi||^2` and the renormalized post-measurement state. Outcomes with
/// `p <= 1e-12` return [`Error::ZeroProbability`].
pub fn apply_kraus(state: &PureState, element: &LocalOperator) -> Result<KrausOutcome> {
    if element.kind != OperatorKind::Kraus {
        return Err(contract("apply_kraus needs a Kraus element"));
    }
    let amps = element.apply_raw(state)?;
    let probability = pairwise_norm_sqr(&amps);
    if probability <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(probability));
    }
    let scale = probability.sqrt();
    Ok(KrausOutcome {
        probability,
        post_state: PureState {
            num_qubits: state.num_qubits(),
            amplitudes: amps.into_iter().map(|a| a / scale).collect(),
        },
    })
}

/// A complete set of normal Kraus elements on one qubit.
#[derive(Clone, Debug)]
pub struct KrausSet {
    elements: Vec<LocalOperator>,
}

impl KrausSet {
    /// Checks that every element is a Kraus element on the same qubit and
    /// that `sum_i L_i^dagger L_i = I` within 1e-10.
    pub fn new(elements: Vec<LocalOperator>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(contract("empty Kraus set"));
        };
        if elements
            .iter()
            .any(|e| e.kind != OperatorKind::Kraus || e.qubit != first.qubit)
        {
            return Err(contract(
                "Kraus set elements must be Kraus operators on one qubit",
            ));
        }
        let mut sum = [[ZERO; 2]; 2];
        for e in &elements {
            let p = mat_mul(&adjoint(&e.matrix), &e.matrix);
            for r in 0..2 {
                for c in 0..2 {
                    sum[r][c] += p[r][c];
                }
            }
        }
        let dev = max_dev(&sum, &IDENTITY2);
        if dev > OPERATOR_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(Self { elements })
    }

    /// `{diag(a, b), diag(sqrt(1-a^2), sqrt(1-b^2))}` on `qubit`.
    pub fn diagonal_pair(qubit: usize, a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(contract("diagonal Kraus parameters must lie in [0, 1]"));
        }
        let d = |x: f64, y: f64| [[C64::new(x, 0.0), ZERO], [ZERO, C64::new(y, 0.0)]];
        Self::new(vec![
            LocalOperator::kraus(qubit, d(a, b))?,
            LocalOperator::kraus(qubit, d((1.0 - a * a).sqrt(), (1.0 - b * b).sqrt()))?,
        ])
    }

    /// Conjugates every element by a unitary frame, `U L U^dagger`. The set
    /// stays complete and normal.
    pub fn in_frame(&self, frame: &Matrix2) -> Result<Self> {
        let adj = adjoint(frame);
        let elements = self
            .elements
            .iter()
            .map(|e| LocalOperator::kraus(e.qubit, mat_mul(&mat_mul(frame, &e.matrix), &adj)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn qubit(&self) -> usize {
        self.elements[0].qubit
    }

    pub fn elements(&self) -> &[LocalOperator] {
        &self.elements
    }
}
