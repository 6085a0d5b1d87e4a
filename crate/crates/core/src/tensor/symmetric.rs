//! Fast path for permutation-symmetric states.
//!
//! For a symmetric state every entry of `T^(N)` depends only on how many of
//! its indices are 1, 2 and 3. We evaluate one representative per multiset,
//! `X^a Y^b Z^c` with the X's first, and weight it by its number of
//! arrangements. That is `C(N+2, 2)` evaluations instead of `3^N`.
//!
//! Two oracles feed the representatives: a checked dense [`PureState`] and a
//! [`DickeSuperposition`], which stores amplitudes in the Dicke basis and never
//! materializes a `2^N` vector.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::CorrTensor;
use crate::error::{contract, Error, Result};
use crate::numeric::{binomial, binomial_u128, multinomial3, pairwise_sum, pow3};
use crate::state::{qubit_bit, PauliMasks, PureState, QubitState, IMAG_RESIDUE_TOL};

/// Elementwise tolerance for the symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Largest register a [`DickeSuperposition`] accepts; binomials stay exact
/// in `u128` up to here.
pub const DICKE_CAP: usize = 128;

/// Source of representative entries `t(X^a Y^b Z^c)`.
pub trait SymmetricOracle: Sync {
    fn num_qubits(&self) -> usize;
    fn representative(&self, ones: usize, twos: usize, threes: usize) -> Result<f64>;
}

/// Verifies permutation symmetry through every adjacent transposition, which
/// together generate the whole symmetric group.
pub fn check_permutation_symmetric(state: &PureState) -> Result<()> {
    let n = state.num_qubits();
    for i in 1..n {
        let swapped = state.swap_qubits(i, i + 1)?;
        let diff = swapped.max_abs_diff(state);
        if diff > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(i, i + 1, diff));
        }
    }
    Ok(())
}

/// A dense state that passed [`check_permutation_symmetric`].
pub struct CheckedSymmetric<'a> {
    state: &'a PureState,
}

impl<'a> CheckedSymmetric<'a> {
    pub fn new(state: &'a PureState) -> Result<Self> {
        check_permutation_symmetric(state)?;
        Ok(Self { state })
    }
}

impl SymmetricOracle for CheckedSymmetric<'_> {
    fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }

    fn representative(&self, ones: usize, twos: usize, threes: usize) -> Result<f64> {
        let n = self.num_qubits();
        let mut masks = PauliMasks {
            flip: 0,
            sign: 0,
            y_count: 0,
        };
        for q in 1..=n {
            let label = if q <= ones {
                1
            } else if q <= ones + twos {
                2
            } else {
                3
            };
            masks.push(qubit_bit(n, q), label);
        }
        debug_assert_eq!(ones + twos + threes, n);
        self.state.expectation_masks(masks)
    }
}

/// Representative values of a supersymmetric `T^(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricCorrelations {
    num_qubits: usize,
    /// `(ones, twos, threes, value)` in lexicographic order of `(ones, twos)`.
    values: Vec<(usize, usize, usize, f64)>,
}

/// Evaluates one representative per multiset through `oracle`.
pub fn symmetric_correlations<O: SymmetricOracle + ?Sized>(oracle: &O) -> Result<SymmetricCorrelations> {
    let n = oracle.num_qubits();
    let keys: Vec<(usize, usize, usize)> = (0..=n)
        .flat_map(|a| (0..=n - a).map(move |b| (a, b, n - a - b)))
        .collect();
    let values = keys
        .into_par_iter()
        .map(|(a, b, c)| oracle.representative(a, b, c).map(|v| (a, b, c, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetricCorrelations {
        num_qubits: n,
        values,
    })
}

/// Checks symmetry of `state`, then evaluates its representatives.
pub fn correlation_tensor_symmetric(state: &PureState) -> Result<SymmetricCorrelations> {
    symmetric_correlations(&CheckedSymmetric::new(state)?)
}

impl SymmetricCorrelations {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of oracle evaluations performed, `C(N+2, 2)`.
    pub fn evaluated(&self) -> usize {
        self.values.len()
    }

    pub fn representatives(&self) -> &[(usize, usize, usize, f64)] {
        &self.values
    }

    pub fn representative(&self, ones: usize, twos: usize) -> Option<f64> {
        if ones + twos > self.num_qubits {
            return None;
        }
        // rows for ones = a' < a hold (n - a' + 1) entries each
        let n = self.num_qubits;
        let row_start: usize = (0..ones).map(|a| n - a + 1).sum();
        self.values.get(row_start + twos).map(|v| v.3)
    }

    /// Entry of the full tensor at an index tuple over `1..=3`.
    pub fn get(&self, index: &[u8]) -> Result<f64> {
        if index.len() != self.num_qubits {
            return Err(contract("index tuple length differs from tensor order"));
        }
        let mut counts = [0usize; 3];
        for &a in index {
            if !(1..=3).contains(&a) {
                return Err(contract(format!("tensor index {a} outside 1..=3")));
            }
            counts[(a - 1) as usize] += 1;
        }
        self.representative(counts[0], counts[1])
            .ok_or_else(|| contract("index outside representative table"))
    }

    /// `||T^(N)||^2 = sum over multisets of multiplicity * t^2`.
    pub fn norm_sqr(&self) -> f64 {
        let weighted: Vec<f64> = self
            .values
            .iter()
            .map(|&(a, b, c, v)| multinomial3(a, b, c) * v * v)
            .collect();
        pairwise_sum(&weighted)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Broadcasts the representatives to a dense tensor over qubits `1..=N`.
    pub fn to_dense(&self, cap: usize) -> Result<CorrTensor> {
        if self.num_qubits > cap {
            return Err(Error::ResourceLimit {
                what: "dense broadcast of symmetric tensor",
                requested: self.num_qubits,
                cap,
            });
        }
        let n = self.num_qubits;
        let entries = (0..pow3(n))
            .map(|mut off| {
                let mut counts = [0usize; 3];
                for _ in 0..n {
                    counts[off % 3] += 1;
                    off /= 3;
                }
                self.representative(counts[0], counts[1]).unwrap_or(0.0)
            })
            .collect();
        CorrTensor::from_entries((1..=n).collect(), entries)
    }
}

/// Symmetric state `sum_s c_s |D_N^s>` stored in the Dicke basis, where
/// `|D_N^s>` is the uniform superposition of weight-`s` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeSuperposition {
    num_qubits: usize,
    coefficients: Vec<C64>,
}

impl DickeSuperposition {
    /// Normalizes `coefficients` (one per excitation number `0..=N`).
    pub fn new(num_qubits: usize, coefficients: Vec<C64>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(contract("need at least one qubit"));
        }
        if num_qubits > DICKE_CAP {
            return Err(Error::ResourceLimit {
                what: "Dicke-basis state",
                requested: num_qubits,
                cap: DICKE_CAP,
            });
        }
        if coefficients.len() != num_qubits + 1 {
            return Err(contract(format!(
                "expected {} Dicke coefficients, got {}",
                num_qubits + 1,
                coefficients.len()
            )));
        }
        let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm <= f64::MIN_POSITIVE || !norm.is_finite() {
            return Err(contract("Dicke coefficients must not all vanish"));
        }
        Ok(Self {
            num_qubits,
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// The single Dicke state `|D_N^s>`.
    pub fn dicke(num_qubits: usize, excitations: usize) -> Result<Self> {
        if excitations > num_qubits {
            return Err(contract(format!(
                "excitation number {excitations} exceeds {num_qubits} qubits"
            )));
        }
        let mut c = vec![C64::new(0.0, 0.0); num_qubits + 1];
        c[excitations] = C64::new(1.0, 0.0);
        Self::new(num_qubits, c)
    }

    /// `sqrt(p)|0..0> + sqrt(1-p)|1..1>`.
    pub fn ghz(num_qubits: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(contract("GHZ weight must lie in [0, 1]"));
        }
        let mut c = vec![C64::new(0.0, 0.0); num_qubits + 1];
        c[0] += C64::new(p.sqrt(), 0.0);
        c[num_qubits] += C64::new((1.0 - p).sqrt(), 0.0);
        Self::new(num_qubits, c)
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// Expands into a dense state vector (small `N` only).
    pub fn to_pure_state(&self) -> Result<PureState> {
        let n = self.num_qubits;
        if n > 24 {
            return Err(Error::ResourceLimit {
                what: "dense expansion of Dicke-basis state",
                requested: n,
                cap: 24,
            });
        }
        let amps = (0..1usize << n)
            .map(|x| {
                let s = x.count_ones() as usize;
                self.coefficients[s] / binomial(n, s).sqrt()
            })
            .collect();
        PureState::from_unnormalized(n, amps)
    }
}

impl SymmetricOracle for DickeSuperposition {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn representative(&self, ones: usize, twos: usize, threes: usize) -> Result<f64> {
        let n = self.num_qubits;
        if ones + twos + threes != n {
            return Err(contract("representative counts must sum to N"));
        }
        let flipped = ones + twos;
        // g[u] = coefficient of z^u in (1+z)^ones (1-z)^twos: signed count of
        // ways to place u excitations on the flipped block
        let g: Vec<f64> = (0..=flipped)
            .map(|u| {
                let lo = u.saturating_sub(twos);
                let hi = u.min(ones);
                let exact: i128 = (lo..=hi)
                    .map(|j| {
                        let term = (binomial_u128(ones, j) * binomial_u128(twos, u - j)) as i128;
                        if (u - j) % 2 == 1 {
                            -term
                        } else {
                            term
                        }
                    })
                    .sum();
                exact as f64
            })
            .collect();

        let mut total = C64::new(0.0, 0.0);
        for (s, cs) in self.coefficients.iter().enumerate() {
            if cs.norm_sqr() == 0.0 {
                continue;
            }
            for (u, &gu) in g.iter().enumerate().take(s.min(flipped) + 1) {
                let w = s - u;
                if w > threes || gu == 0.0 {
                    continue;
                }
                let target = s + flipped - 2 * u;
                let ct = self.coefficients[target];
                if ct.norm_sqr() == 0.0 {
                    continue;
                }
                let sign = if w % 2 == 1 { -1.0 } else { 1.0 };
                let overlap =
                    sign * gu * binomial(threes, w) / (binomial(n, s) * binomial(n, target)).sqrt();
                total += ct.conj() * cs * overlap;
            }
        }
        total *= match twos % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        if total.im.abs() >= IMAG_RESIDUE_TOL {
            return Err(Error::NumericalIntegrity {
                residue: total.im.abs(),
                tolerance: IMAG_RESIDUE_TOL,
            });
        }
        Ok(total.re)
    }
}
