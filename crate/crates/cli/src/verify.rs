use std::f64::consts::PI;

use corrtensor::families::{
    ghz_state, ghz_w_superposition, heisenberg_eigenstate, schmidt3_state, w_state, w_tilde_state,
};
use corrtensor::measure::{
    compare_heisenberg_formula, e_t_log, e_t_value, ghz_closed_form, schmidt3_lower_bound,
    two_qubit_closed_form, two_qubit_determinant_form, w_closed_form, wghz_closed_form,
};
use corrtensor::monotonicity::{lu_trials, povm_trials, trace_out_trials, TrialSummary};
use corrtensor::random::{haar_state, random_product_state, trial_rng};
use corrtensor::roof::{convexity_check, roof_estimate, RoofConfig, OPTIMIZER_SLACK};
use corrtensor::tensor::{extended_tensor, full_correlation_tensor, TensorNorm};
use corrtensor::{DensityMatrix, PureState, C64};
use rand::Rng;
use serde::Serialize;

use crate::{emit, to_json, CliError, CliResult, Global};

pub const SUITES: [&str; 6] = ["closed-forms", "invariance", "monotonicity", "multiplicativity", "purity", "roof"];

const CLOSED_FORM_TOL: f64 = 1e-9;
const RANDOM_QUBITS: usize = 5;

#[derive(Serialize)]
struct Check {
    name: String,
    trials: usize,
    /// Largest deviation, or for one-sided checks the worst shortfall.
    worst: f64,
    tolerance: f64,
    passed: bool,
    failures: Vec<u64>,
}

impl Check {
    /// `deviations` are indexed trial values that must stay at or below `tol`.
    fn from_deviations(name: &str, tol: f64, deviations: impl IntoIterator<Item = f64>) -> Self {
        let mut worst = 0.0f64;
        let mut failures = Vec::new();
        let mut trials = 0;
        for (i, d) in deviations.into_iter().enumerate() {
            trials += 1;
            worst = worst.max(d);
            if d.is_nan() || d > tol {
                failures.push(i as u64);
            }
        }
        Check { name: name.into(), trials, worst, tolerance: tol, passed: failures.is_empty(), failures }
    }

    fn from_summary(name: &str, tol: f64, s: TrialSummary) -> Self {
        let worst = (-s.worst_margin).max(0.0);
        let passed = s.passed() && worst <= tol;
        Check { name: name.into(), trials: s.trials, worst, tolerance: tol, passed, failures: s.violations }
    }
}

#[derive(Serialize)]
struct Manifest {
    suite: String,
    seed: u64,
    passed: bool,
    checks: Vec<Check>,
}

fn amps4(s: &PureState) -> [C64; 4] {
    let a = s.amplitudes();
    [a[0], a[1], a[2], a[3]]
}

fn closed_forms(seed: u64) -> CliResult<Vec<Check>> {
    let mut ghz = Vec::new();
    for n in [2, 3, 4, 6] {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            ghz.push((e_t_value(&ghz_state(p, n)?)? - ghz_closed_form(p, n)?).abs());
        }
    }
    let w = (3..=8)
        .map(|n| Ok((e_t_value(&w_state(n)?)? - w_closed_form(n)?).abs()))
        .collect::<CliResult<Vec<_>>>()?;
    let mut wghz = Vec::new();
    for phi in [0.0, PI / 3.0, PI] {
        for i in 0..=10 {
            let s = i as f64 / 10.0;
            wghz.push((e_t_value(&ghz_w_superposition(s, phi)?)? - wghz_closed_form(s)?).abs());
        }
    }
    let mut rng = trial_rng(seed, 21);
    let mut det = Vec::new();
    let mut printed = Vec::new();
    for _ in 0..200 {
        let s = haar_state(2, &mut rng)?;
        det.push((e_t_value(&s)? - two_qubit_determinant_form(amps4(&s))?).abs());
        // the modulus form holds when all amplitudes are real and nonnegative
        let real: Vec<f64> = s.amplitudes().iter().map(|a| a.norm()).collect();
        let r = PureState::from_real(2, &real)?;
        printed.push((e_t_value(&r)? - two_qubit_closed_form(amps4(&r))?).abs());
    }
    let mut wclass = Vec::new();
    for n in 3..=6 {
        let w = e_t_value(&w_state(n)?)?;
        wclass.push((w - e_t_value(&w_tilde_state(n)?)?).abs());
        for k in 1..n {
            wclass.push((w - e_t_value(&heisenberg_eigenstate(n, k)?)?).abs());
        }
    }
    let heis = [4, 6]
        .into_iter()
        .map(|n| {
            let c = compare_heisenberg_formula(n, n / 2)?;
            Ok((c.formula_norm_sqr - c.tensor_norm_sqr).abs())
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut schmidt = Vec::new();
    for _ in 0..200 {
        let raw: [f64; 5] = std::array::from_fn(|_| rng.random::<f64>());
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let l = raw.map(|x| x / norm);
        let s = schmidt3_state(l, rng.random::<f64>() * 2.0 * PI)?;
        schmidt.push(schmidt3_lower_bound(l) - full_correlation_tensor(&s)?.norm_sqr());
    }
    Ok(vec![
        Check::from_deviations("ghz p-grid, N in {2,3,4,6}", CLOSED_FORM_TOL, ghz),
        Check::from_deviations("w N=3..8", CLOSED_FORM_TOL, w),
        Check::from_deviations("ghz+w s-grid, three phases", CLOSED_FORM_TOL, wghz),
        Check::from_deviations("two-qubit determinant form, Haar states", CLOSED_FORM_TOL, det),
        Check::from_deviations("two-qubit modulus form, nonnegative amplitudes", CLOSED_FORM_TOL, printed),
        Check::from_deviations("w-class equivalences N=3..6", CLOSED_FORM_TOL, wclass),
        Check::from_deviations("heisenberg norm formula N=4,6", CLOSED_FORM_TOL, heis),
        Check::from_deviations("schmidt3 lower bound", CLOSED_FORM_TOL, schmidt),
    ])
}

fn multiplicativity(seed: u64, trials: usize) -> CliResult<Vec<Check>> {
    let mut norm = Vec::new();
    let mut log = Vec::new();
    let mut sup = Vec::new();
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, i);
        let a = haar_state(rng.random_range(2..=3), &mut rng)?;
        let b = haar_state(rng.random_range(2..=3), &mut rng)?;
        let ab = a.tensor(&b)?;
        let (ta, tb) = (full_correlation_tensor(&a)?.norm(), full_correlation_tensor(&b)?.norm());
        norm.push((full_correlation_tensor(&ab)?.norm() - ta * tb).abs());
        log.push((e_t_log(&ab)? - e_t_log(&a)? - e_t_log(&b)?).abs());
        sup.push(e_t_value(&a)? + e_t_value(&b)? - e_t_value(&ab)?);
    }
    Ok(vec![
        Check::from_deviations("norm multiplicative", 1e-8, norm),
        Check::from_deviations("log measure additive", 1e-8, log),
        Check::from_deviations("E_T superadditive", 1e-9, sup),
    ])
}

fn purity(seed: u64, trials: usize) -> CliResult<Vec<Check>> {
    (2..=6)
        .map(|n| {
            let res = (0..trials as u64)
                .map(|i| {
                    let s = haar_state(n, &mut trial_rng(seed ^ n as u64, i))?;
                    let dim = (1u64 << n) as f64;
                    Ok((extended_tensor(&s)?.norm_sqr() - dim).abs())
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Check::from_deviations(&format!("extended norm^2 = 2^N, N={n}"), 1e-7, res))
        })
        .collect()
}

fn roof(seed: u64) -> CliResult<Vec<Check>> {
    let cfg = RoofConfig { restarts: 8, seed, ..Default::default() };
    let mut pure = Vec::new();
    let mut separable = Vec::new();
    for i in 0..5 {
        let mut rng = trial_rng(seed, i);
        let psi = haar_state(2, &mut rng)?;
        let est = roof_estimate(&DensityMatrix::from_pure(&psi), &cfg)?;
        pure.push((est.value - e_t_value(&psi)?).abs());
        let states = (0..3)
            .map(|_| random_product_state(2, &mut rng))
            .collect::<Result<Vec<_>, _>>()?;
        let rho = DensityMatrix::from_ensemble(&[0.5, 0.3, 0.2], &states)?;
        separable.push(roof_estimate(&rho, &cfg)?.value);
    }
    let a = DensityMatrix::from_pure(&ghz_state(0.5, 2)?);
    let b = DensityMatrix::from_pure(&PureState::from_real(2, &[0.0, 0.6, -0.8, 0.0])?);
    let (lhs, rhs) = convexity_check(&[a, b], &[0.5, 0.5], &cfg)?;
    Ok(vec![
        Check::from_deviations("pure-state consistency", 1e-8, pure),
        Check::from_deviations("separable mixtures", 1e-6, separable),
        Check::from_deviations("convexity", OPTIMIZER_SLACK, [rhs - lhs]),
    ])
}

pub fn run(g: &Global, suite: &str, trials: Option<usize>) -> CliResult<()> {
    let seed = g.seed;
    let checks = match suite {
        "closed-forms" => closed_forms(seed)?,
        "invariance" => vec![Check::from_summary(
            "local-unitary norm change",
            1e-9,
            lu_trials(seed, trials.unwrap_or(500), RANDOM_QUBITS)?,
        )],
        "monotonicity" => {
            let t = trials.unwrap_or(1000);
            vec![
                Check::from_summary("povm average", 1e-8, povm_trials(seed, t, RANDOM_QUBITS)?),
                Check::from_summary("trace out one qubit", 1e-8, trace_out_trials(seed, t, RANDOM_QUBITS)?),
            ]
        }
        "multiplicativity" => multiplicativity(seed, trials.unwrap_or(100))?,
        "purity" => purity(seed, trials.unwrap_or(100))?,
        "roof" => roof(seed)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}'; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    let manifest = Manifest { suite: suite.into(), seed, passed, checks };
    emit(g.out.as_deref(), &to_json(&manifest)?)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::SuiteFailed(suite.into()))
    }
}
