//! Upper-bound estimates of the convex roof
//! `E_T(rho) = min sum_i p_i E_T(psi_i)` over pure-state decompositions.
//!
//! A size-`m` decomposition of `rho` is `psi~_i = sum_j U_ij sqrt(l_j) e_j`
//! for an `m x r` isometry `U`, where `(l_j, e_j)` is the spectral ensemble.
//! Because `T` is quadratic in the state, `p_i ||T(psi_i)|| = ||T(psi~_i)||`,
//! so the objective is `sum_i ||T(psi~_i)|| - 1`. We minimize it by
//! coordinate descent over 2x2 unitary mixings of pairs of elements, which
//! generate every isometry, with several seeded restarts.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::random::{haar_unitary, trial_rng};
use crate::numeric::pow3;
use crate::state::{qubit_bit, DensityMatrix, PauliMasks, PureState};
use crate::tensor::{full_correlation_tensor, TensorNorm};

/// Largest register accepted by [`roof_estimate`].
pub const ROOF_QUBIT_CAP: usize = 4;
/// Eigenvalues at or below this are dropped from the spectral ensemble.
pub const RANK_TOL: f64 = 1e-12;
/// Slack granted to the optimizer when comparing roof values.
pub const OPTIMIZER_SLACK: f64 = 1e-4;
const PATTERN_STEPS: usize = 120;

/// Weighted pure states on a common register.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(contract("decomposition needs matching nonempty weights and states"));
        }
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(contract("decomposition weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(contract(format!("decomposition weights sum to {total}")));
        }
        let n = states[0].num_qubits();
        if states.iter().any(|s| s.num_qubits() != n) {
            return Err(contract("decomposition states differ in size"));
        }
        Ok(Self { weights, states })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reconstruct(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_ensemble(&self.weights, &self.states)
    }

    /// `sum_i p_i E_T(psi_i)`.
    pub fn average_e_t(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (w, s) in self.weights.iter().zip(&self.states) {
            acc += w * (full_correlation_tensor(s)?.norm() - 1.0);
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofConfig {
    /// Decomposition size; `None` means twice the rank.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// A sweep gaining less than this ends a restart.
    pub tolerance: f64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 32,
            seed: 0,
            max_sweeps: 100,
            tolerance: 1e-12,
        }
    }
}

/// Best decomposition found. `value` is an upper bound on the roof.
#[derive(Clone, Debug, PartialEq)]
pub struct RoofEstimate {
    pub value: f64,
    pub decomposition: Decomposition,
    pub restarts_used: usize,
    pub converged: bool,
    /// Average over the spectral ensemble, the first starting point.
    pub spectral_value: f64,
}

/// Evaluates `||T(v)||` for unnormalized vectors, which equals
/// `|v|^2 ||T(v/|v|)||`. Serial and allocation-free; the optimizer calls it
/// millions of times on tiny registers.
struct Kernel {
    masks: Vec<PauliMasks>,
}

impl Kernel {
    fn new(n: usize) -> Self {
        let masks = (0..pow3(n))
            .map(|mut off| {
                let mut m = PauliMasks {
                    flip: 0,
                    sign: 0,
                    y_count: 0,
                };
                for q in (1..=n).rev() {
                    m.push(qubit_bit(n, q), (off % 3) as u8 + 1);
                    off /= 3;
                }
                m
            })
            .collect();
        Self { masks }
    }

    fn weighted_norm(&self, v: &[C64]) -> f64 {
        let mut total = 0.0;
        for m in &self.masks {
            let mut acc = C64::new(0.0, 0.0);
            for (x, a) in v.iter().enumerate() {
                let term = v[x ^ m.flip].conj() * a;
                if (x & m.sign).count_ones() & 1 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            // only the real part of i^y * acc survives
            let t = match m.y_count % 4 {
                0 => acc.re,
                1 => -acc.im,
                2 => -acc.re,
                _ => acc.im,
            };
            total += t * t;
        }
        total.sqrt()
    }
}

fn mix(x: &[C64], y: &[C64], theta: f64, phi: f64) -> (Vec<C64>, Vec<C64>) {
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let a = x.iter().zip(y).map(|(&xi, &yi)| xi * c - yi * e.conj() * s).collect();
    let b = x.iter().zip(y).map(|(&xi, &yi)| xi * e * s + yi * c).collect();
    (a, b)
}

struct Search<'k> {
    kernel: &'k Kernel,
    n: usize,
    vecs: Vec<Vec<C64>>,
    costs: Vec<f64>,
}

impl<'k> Search<'k> {
    fn new(kernel: &'k Kernel, n: usize, vecs: Vec<Vec<C64>>) -> Self {
        let costs = vecs.iter().map(|v| kernel.weighted_norm(v)).collect();
        Self {
            kernel,
            n,
            vecs,
            costs,
        }
    }

    fn objective(&self) -> f64 {
        self.costs.iter().sum::<f64>() - 1.0
    }

    fn pair_cost(&self, i: usize, k: usize, theta: f64, phi: f64) -> f64 {
        let (a, b) = mix(&self.vecs[i], &self.vecs[k], theta, phi);
        self.kernel.weighted_norm(&a) + self.kernel.weighted_norm(&b)
    }

    /// Best 2x2 mixing of elements `i` and `k`: grid over
    /// `theta in (0, pi/2)`, `phi in [0, 2 pi)`, then compass refinement.
    fn optimize_pair(&mut self, i: usize, k: usize) -> f64 {
        let base = self.costs[i] + self.costs[k];
        if base == 0.0 {
            return 0.0;
        }
        let mut best = (base, 0.0, 0.0);
        for ti in 1..8 {
            for pi_ in 0..8 {
                let (t, p) = (ti as f64 * PI / 16.0, pi_ as f64 * PI / 4.0);
                let c = self.pair_cost(i, k, t, p);
                if c < best.0 {
                    best = (c, t, p);
                }
            }
        }
        // pattern search: grow the step after a success, shrink after a miss
        let (mut dt, mut dp) = (PI / 32.0, PI / 8.0);
        for _ in 0..PATTERN_STEPS {
            if dt < 1e-8 {
                break;
            }
            let mut moved = false;
            for (st, sp) in [(dt, 0.0), (-dt, 0.0), (0.0, dp), (0.0, -dp)] {
                let (t, p) = (best.1 + st, best.2 + sp);
                let c = self.pair_cost(i, k, t, p);
                if c < best.0 {
                    best = (c, t, p);
                    moved = true;
                    break;
                }
            }
            let f = if moved { 2.0 } else { 0.5 };
            dt = (dt * f).min(PI / 4.0);
            dp = (dp * f).min(PI);
        }
        let gain = base - best.0;
        if gain > 1e-15 {
            let (a, b) = mix(&self.vecs[i], &self.vecs[k], best.1, best.2);
            self.costs[i] = self.kernel.weighted_norm(&a);
            self.costs[k] = self.kernel.weighted_norm(&b);
            self.vecs[i] = a;
            self.vecs[k] = b;
            gain
        } else {
            0.0
        }
    }

    fn run(&mut self, cfg: &RoofConfig) -> bool {
        let m = self.vecs.len();
        for _ in 0..cfg.max_sweeps {
            let mut gain = 0.0;
            for i in 0..m {
                for k in i + 1..m {
                    gain += self.optimize_pair(i, k);
                }
            }
            if gain < cfg.tolerance {
                return true;
            }
        }
        false
    }

    fn into_decomposition(self) -> Result<Decomposition> {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for v in self.vecs {
            let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            if p > RANK_TOL {
                weights.push(p);
                states.push(PureState::from_unnormalized(self.n, v)?);
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Decomposition::new(weights, states)
    }
}

/// `sqrt(l_j) e_j` for the eigenvalues above [`RANK_TOL`].
pub fn spectral_ensemble(rho: &DensityMatrix) -> Vec<Vec<C64>> {
    let (vals, vecs) = rho.eigen();
    vals.iter()
        .zip(vecs)
        .rev()
        .filter(|(l, _)| **l > RANK_TOL)
        .map(|(l, v)| v.into_iter().map(|a| a * l.sqrt()).collect())
        .collect()
}

fn mixed_start<R: Rng>(spectral: &[Vec<C64>], m: usize, rng: &mut R) -> Vec<Vec<C64>> {
    let u = haar_unitary(m, rng);
    let dim = spectral[0].len();
    (0..m)
        .map(|i| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            for (j, e) in spectral.iter().enumerate() {
                for (x, y) in v.iter_mut().zip(e) {
                    *x += u[(i, j)] * y;
                }
            }
            v
        })
        .collect()
}

/// Multi-restart search; restart 0 starts from the spectral ensemble so the
/// result never exceeds the spectral average.
pub fn roof_estimate(rho: &DensityMatrix, config: &RoofConfig) -> Result<RoofEstimate> {
    let n = rho.labels().len();
    if n > ROOF_QUBIT_CAP {
        return Err(Error::ResourceLimit {
            what: "convex roof register",
            requested: n,
            cap: ROOF_QUBIT_CAP,
        });
    }
    let spectral = spectral_ensemble(rho);
    let rank = spectral.len();
    if rank == 0 {
        return Err(Error::InvalidDensityMatrix("no eigenvalue above rank tolerance".into()));
    }
    let m = config.ensemble_size.unwrap_or(2 * rank);
    if m < rank {
        return Err(Error::InvalidParameter(format!(
            "ensemble size {m} below rank {rank}"
        )));
    }
    let restarts = config.restarts.max(1);
    let zero = vec![C64::new(0.0, 0.0); rho.dim()];
    let spectral_start: Vec<Vec<C64>> = (0..m)
        .map(|i| spectral.get(i).cloned().unwrap_or_else(|| zero.clone()))
        .collect();
    let kernel = Kernel::new(n);
    let spectral_value = Search::new(&kernel, n, spectral_start.clone()).objective();

    let runs = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                spectral_start.clone()
            } else {
                mixed_start(&spectral, m, &mut trial_rng(config.seed, r))
            };
            let mut search = Search::new(&kernel, n, start);
            let converged = search.run(config);
            (search.objective(), converged, search)
        })
        .collect::<Vec<_>>();

    let (value, converged, search) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one restart");
    Ok(RoofEstimate {
        value,
        decomposition: search.into_decomposition()?,
        restarts_used: restarts,
        converged,
        spectral_value,
    })
}

/// `(sum_i w_i roof(rho_i), roof(sum_i w_i rho_i))`; convexity means the
/// second is at most the first.
pub fn convexity_check(rhos: &[DensityMatrix], weights: &[f64], config: &RoofConfig) -> Result<(f64, f64)> {
    if rhos.is_empty() || rhos.len() != weights.len() {
        return Err(contract("convexity check needs matching nonempty inputs"));
    }
    if rhos.iter().any(|r| r.dim() != rhos[0].dim()) {
        return Err(contract("density matrices differ in dimension"));
    }
    let mut lhs = 0.0;
    for (r, w) in rhos.iter().zip(weights) {
        lhs += w * roof_estimate(r, config)?.value;
    }
    let mixed = DensityMatrix::mixture(weights, rhos)?;
    let rhs = roof_estimate(&mixed, config)?.value;
    Ok((lhs, rhs))
}
