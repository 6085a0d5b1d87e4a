//! Grover search with one marked item, tracking `E_T` and the success
//! probability after every iteration.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::measure::{e_t_with, r_n, MeasureOptions};
use crate::state::PureState;
use crate::tensor::GENERIC_TENSOR_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroverRow {
    pub iteration: usize,
    pub e_t: f64,
    pub success_prob: f64,
    pub e_t_normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroverTrace {
    pub n_qubits: usize,
    pub target: usize,
    pub rows: Vec<GroverRow>,
}

/// Iteration count closest to the first success peak,
/// `round(pi / (4 theta) - 1/2)` with `sin theta = 2^{-N/2}`.
pub fn optimal_iterations(n: usize) -> usize {
    let theta = (1.0 / ((1u64 << n) as f64).sqrt()).asin();
    (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}

/// Runs `iterations` steps of `G = (2|s><s| - I) U_a` from the uniform
/// superposition, recording row 0 before the first step.
pub fn grover_run(n: usize, target: usize, iterations: usize) -> Result<GroverTrace> {
    grover_run_capped(n, target, iterations, GENERIC_TENSOR_CAP)
}

pub fn grover_run_capped(n: usize, target: usize, iterations: usize, cap: usize) -> Result<GroverTrace> {
    if n < 2 {
        return Err(contract("Grover search needs at least two qubits"));
    }
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "Grover register",
            requested: n,
            cap,
        });
    }
    let dim = 1usize << n;
    if target >= dim {
        return Err(contract(format!("target {target} out of range for {n} qubits")));
    }
    let r = r_n(n)?;
    let opts = MeasureOptions {
        cap,
        normalize: false,
    };
    let mut amps = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let mut rows = Vec::with_capacity(iterations + 1);
    for iteration in 0..=iterations {
        if iteration > 0 {
            amps[target] = -amps[target];
            let mean = amps.iter().sum::<C64>() / dim as f64;
            for a in &mut amps {
                *a = 2.0 * mean - *a;
            }
        }
        let state = PureState::new(n, amps.clone())?;
        let e_t = e_t_with(&state, opts)?.e_t;
        rows.push(GroverRow {
            iteration,
            e_t,
            success_prob: amps[target].norm_sqr(),
            e_t_normalized: e_t / r,
        });
    }
    Ok(GroverTrace {
        n_qubits: n,
        target,
        rows,
    })
}

/// Interior indices strictly below both neighbours.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
        .collect()
}

/// Interior indices strictly above both neighbours.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// Extrema of the first `len` rows and whether each `E_T` minimum has a
/// success maximum within `slack` iterations, and vice versa.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub e_t_minima: Vec<usize>,
    pub success_maxima: Vec<usize>,
    pub aligned: bool,
}

impl GroverTrace {
    pub fn peak_success(&self) -> (usize, f64) {
        self.rows
            .iter()
            .map(|r| (r.iteration, r.success_prob))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    }

    pub fn alignment(&self, len: usize, slack: usize) -> Alignment {
        let rows = &self.rows[..len.min(self.rows.len())];
        let e: Vec<f64> = rows.iter().map(|r| r.e_t).collect();
        let p: Vec<f64> = rows.iter().map(|r| r.success_prob).collect();
        let e_t_minima = local_minima(&e);
        let success_maxima = local_maxima(&p);
        let near = |a: usize, set: &[usize]| set.iter().any(|&b| a.abs_diff(b) <= slack);
        let aligned = !e_t_minima.is_empty()
            && e_t_minima.iter().all(|&i| near(i, &success_maxima))
            && success_maxima.iter().all(|&i| near(i, &e_t_minima));
        Alignment {
            e_t_minima,
            success_maxima,
            aligned,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_as_product_state() {
        let t = grover_run(4, 3, 3).unwrap();
        assert!(t.rows[0].e_t.abs() < 1e-9);
        assert!((t.rows[0].success_prob - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(t.rows.len(), 4);
    }

    #[test]
    fn two_qubits_hit_in_one_step() {
        let t = grover_run(2, 2, 1).unwrap();
        assert!((t.rows[1].success_prob - 1.0).abs() < 1e-12);
        assert_eq!(optimal_iterations(2), 1);
    }

    #[test]
    fn target_relabeling_is_lu_invariant() {
        let a = grover_run(5, 0, 8).unwrap();
        let b = grover_run(5, 19, 8).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.e_t - y.e_t).abs() < 1e-9);
            assert!((x.success_prob - y.success_prob).abs() < 1e-12);
        }
    }

    #[test]
    fn extrema_helpers() {
        let v = [3.0, 1.0, 2.0, 2.0, 0.5, 4.0];
        assert_eq!(local_minima(&v), vec![1, 4]);
        assert_eq!(local_maxima(&v), Vec::<usize>::new());
        assert!(local_minima(&[1.0]).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(grover_run(3, 8, 1).is_err());
        assert!(grover_run(13, 0, 1).is_err());
    }
}
