//! Executable checks of local-unitary invariance, expected-entanglement
//! monotonicity under local measurements, and loss of correlation on
//! tracing out a qubit.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::measure::e_t_value;
use crate::random::{haar_state, random_diagonal_kraus, random_unitary_layer, trial_rng};
use crate::state::{apply_kraus, apply_local_unitary, partial_trace, KrausSet, LocalOperator, PureState};
use crate::tensor::{full_correlation_tensor, TensorNorm};

/// Tolerance on the total outcome probability.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;
/// Slack allowed on the monotonicity inequalities.
pub const MONOTONE_SLACK: f64 = 1e-8;

/// `||T^(N)||` before and after a layer of local unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LuCheck {
    pub before: f64,
    pub after: f64,
}

impl LuCheck {
    pub fn change(&self) -> f64 {
        (self.before - self.after).abs()
    }
}

/// Applies one unitary per qubit and compares tensor norms.
pub fn lu_invariance_check(state: &PureState, unitaries: &[LocalOperator]) -> Result<LuCheck> {
    let n = state.num_qubits();
    let mut seen = vec![false; n + 1];
    for u in unitaries {
        if u.qubit == 0 || u.qubit > n || std::mem::replace(&mut seen[u.qubit], true) {
            return Err(contract("need at most one unitary per qubit, each in range"));
        }
    }
    let before = full_correlation_tensor(state)?.norm();
    let mut out = state.clone();
    for u in unitaries {
        // re-validate so hand-built operators cannot slip through
        let checked = LocalOperator::unitary(u.qubit, u.matrix)?;
        out = apply_local_unitary(&out, &checked)?;
    }
    let after = full_correlation_tensor(&out)?.norm();
    Ok(LuCheck { before, after })
}

/// One branch of a local measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmOutcome {
    pub probability: f64,
    pub e_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmExperimentReport {
    pub input_e_t: f64,
    pub outcomes: Vec<PovmOutcome>,
    pub expected_e_t: f64,
    /// `input_e_t - expected_e_t`; nonnegative for a monotone.
    pub gap: f64,
    pub seed: Option<u64>,
}

/// Measures `kraus` on `state` and compares `E_T` with the average over
/// outcomes. Branches of vanishing probability are kept with `e_t = 0`.
pub fn povm_experiment(state: &PureState, kraus: &KrausSet) -> Result<PovmExperimentReport> {
    let input_e_t = e_t_value(state)?;
    let mut outcomes = Vec::with_capacity(kraus.elements().len());
    for el in kraus.elements() {
        match apply_kraus(state, el) {
            Ok(o) => outcomes.push(PovmOutcome {
                probability: o.probability,
                e_t: e_t_value(&o.post_state)?,
            }),
            Err(Error::ZeroProbability(p)) => outcomes.push(PovmOutcome {
                probability: p,
                e_t: 0.0,
            }),
            Err(e) => return Err(e),
        }
    }
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::NumericalIntegrity {
            residue: (total - 1.0).abs(),
            tolerance: PROBABILITY_SUM_TOL,
        });
    }
    let expected_e_t = outcomes.iter().map(|o| o.probability * o.e_t).sum();
    Ok(PovmExperimentReport {
        input_e_t,
        outcomes,
        expected_e_t,
        gap: input_e_t - expected_e_t,
        seed: None,
    })
}

/// `(||T^(N)||, ||T^(N-1)||)` of the state and of its reduction with
/// `qubit` traced out.
pub fn trace_out_comparison(state: &PureState, qubit: usize) -> Result<(f64, f64)> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(contract("tracing out needs at least two qubits"));
    }
    if qubit == 0 || qubit > n {
        return Err(contract(format!("qubit {qubit} outside 1..={n}")));
    }
    let keep: Vec<usize> = (1..=n).filter(|&q| q != qubit).collect();
    let reduced = partial_trace(state, &keep)?;
    let full = full_correlation_tensor(state)?.norm();
    let part = full_correlation_tensor(&reduced)?.norm();
    Ok((full, part))
}

/// Worst case of a randomized inequality check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub master_seed: u64,
    pub trials: usize,
    /// Smallest `rhs - lhs` seen; negative beyond the slack means violation.
    pub worst_margin: f64,
    /// Trial indices whose margin fell below `-MONOTONE_SLACK`.
    pub violations: Vec<u64>,
}

impl TrialSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn collect(master_seed: u64, margins: Vec<(u64, f64)>) -> Self {
        let worst_margin = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        let violations = margins
            .iter()
            .filter(|m| m.1 < -MONOTONE_SLACK)
            .map(|m| m.0)
            .collect();
        Self {
            master_seed,
            trials: margins.len(),
            worst_margin,
            violations,
        }
    }
}

fn random_size<R: Rng>(rng: &mut R, max_qubits: usize) -> usize {
    rng.random_range(2..=max_qubits.max(2))
}

/// Random diagonal Kraus pairs on random qubits of Haar states.
pub fn povm_trials(master_seed: u64, trials: usize, max_qubits: usize) -> Result<TrialSummary> {
    let margins = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(master_seed, i);
            let n = random_size(&mut rng, max_qubits);
            let state = haar_state(n, &mut rng)?;
            let qubit = rng.random_range(1..=n);
            let kraus = random_diagonal_kraus(qubit, &mut rng)?;
            Ok((i, povm_experiment(&state, &kraus)?.gap))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialSummary::collect(master_seed, margins))
}

/// Trace out every qubit of random Haar states.
pub fn trace_out_trials(master_seed: u64, trials: usize, max_qubits: usize) -> Result<TrialSummary> {
    let margins = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(master_seed, i);
            let n = random_size(&mut rng, max_qubits);
            let state = haar_state(n, &mut rng)?;
            let mut worst = f64::INFINITY;
            for q in 1..=n {
                let (full, part) = trace_out_comparison(&state, q)?;
                worst = worst.min(full - part);
            }
            Ok((i, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialSummary::collect(master_seed, margins))
}

/// Random states under random local unitary layers; margin is minus the
/// norm change.
pub fn lu_trials(master_seed: u64, trials: usize, max_qubits: usize) -> Result<TrialSummary> {
    let margins = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(master_seed, i);
            let n = random_size(&mut rng, max_qubits);
            let state = haar_state(n, &mut rng)?;
            let layer = random_unitary_layer(n, &mut rng)?;
            Ok((i, -lu_invariance_check(&state, &layer)?.change()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialSummary::collect(master_seed, margins))
}
