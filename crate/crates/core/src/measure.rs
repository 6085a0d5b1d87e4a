//! The measures `E_T = ||T^(N)|| - 1` and `log2 ||T^(N)||`, the GHZ
//! normalization `R_N`, and closed forms for the standard families.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::numeric::binomial;
use crate::state::{PureState, QubitState, NORM_TOL};
use crate::tensor::symmetric::{
    correlation_tensor_symmetric, symmetric_correlations, DickeSuperposition, SymmetricOracle,
};
use crate::tensor::{correlation_tensor_capped, TensorNorm, GENERIC_TENSOR_CAP};

/// Result of evaluating the measure on one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub norm: f64,
    pub e_t: f64,
    pub e_t_log: f64,
    /// `e_t / R_N`, present when normalization was requested and `N >= 2`.
    pub normalized: Option<f64>,
    pub n_qubits: usize,
    #[serde(with = "millis")]
    #[serde(rename = "elapsed_ms")]
    pub elapsed: Duration,
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Duration::try_from_secs_f64(ms.max(0.0) / 1e3).map_err(serde::de::Error::custom)
    }
}

impl MeasureReport {
    /// Builds a report from a tensor norm.
    pub fn from_norm(norm: f64, n_qubits: usize, normalize: bool, elapsed: Duration) -> Self {
        let e_t = norm - 1.0;
        let normalized = if normalize && n_qubits >= 2 {
            r_n(n_qubits).ok().map(|r| e_t / r)
        } else {
            None
        };
        Self {
            norm,
            e_t,
            e_t_log: norm.log2(),
            normalized,
            n_qubits,
            elapsed,
        }
    }
}

/// Knobs for [`e_t_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureOptions {
    pub cap: usize,
    pub normalize: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            cap: GENERIC_TENSOR_CAP,
            normalize: false,
        }
    }
}

/// `||T^(N)|| - 1` through the generic tensor path. For a density matrix
/// this is the plain tensor norm of `rho`, not the convex roof.
pub fn e_t<S: QubitState + ?Sized>(state: &S) -> Result<MeasureReport> {
    e_t_with(state, MeasureOptions::default())
}

pub fn e_t_with<S: QubitState + ?Sized>(state: &S, opts: MeasureOptions) -> Result<MeasureReport> {
    let start = Instant::now();
    let n = state.num_qubits();
    let subset: Vec<usize> = (1..=n).collect();
    let t = correlation_tensor_capped(state, &subset, opts.cap)?;
    Ok(MeasureReport::from_norm(t.norm(), n, opts.normalize, start.elapsed()))
}

/// Shorthand for the bare `E_T` value.
pub fn e_t_value<S: QubitState + ?Sized>(state: &S) -> Result<f64> {
    e_t(state).map(|r| r.e_t)
}

/// `log2 ||T^(N)||`, additive over tensor products.
pub fn e_t_log<S: QubitState + ?Sized>(state: &S) -> Result<f64> {
    e_t(state).map(|r| r.e_t_log)
}

/// `E_T` of a permutation-symmetric dense state via the representative path.
pub fn e_t_symmetric(state: &PureState, normalize: bool) -> Result<MeasureReport> {
    let start = Instant::now();
    let t = correlation_tensor_symmetric(state)?;
    Ok(MeasureReport::from_norm(t.norm(), state.num_qubits(), normalize, start.elapsed()))
}

/// `E_T` of a Dicke-basis state; reaches `N` far beyond the dense caps.
pub fn e_t_dicke(state: &DickeSuperposition, normalize: bool) -> Result<MeasureReport> {
    let start = Instant::now();
    let t = symmetric_correlations(state)?;
    Ok(MeasureReport::from_norm(t.norm(), state.num_qubits(), normalize, start.elapsed()))
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")))
    }
}

/// `E_T` of the maximally entangled `N`-qubit GHZ state.
pub fn r_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("R_N needs N >= 2, got {n}")));
    }
    let even = if n.is_multiple_of(2) { 2.0 } else { 0.0 };
    let tail: f64 = (1..=n / 2).map(|k| binomial(n, 2 * k)).sum();
    Ok((1.0 + 0.25 * even * even + tail).sqrt() - 1.0)
}

/// `E_T` of `sqrt(p)|0..0> + sqrt(1-p)|1..1>`.
pub fn ghz_closed_form(p: f64, n: usize) -> Result<f64> {
    check_unit("p", p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ needs N >= 2, got {n}")));
    }
    let c = 4.0 * p * (1.0 - p);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let z = p + sign * (1.0 - p);
    let tail: f64 = (1..=n / 2).map(|k| binomial(n, 2 * k)).sum();
    Ok((c + z * z + c * tail).sqrt() - 1.0)
}

/// `E_T` of the `N`-qubit W state.
pub fn w_closed_form(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("W needs N >= 3, got {n}")));
    }
    let n = n as f64;
    Ok((1.0 + 4.0 * (n - 1.0) / n).sqrt() - 1.0)
}

/// `E_T` of `sqrt(s)|GHZ_3> + sqrt(1-s) e^{i phi}|W_3>`; independent of phi.
pub fn wghz_closed_form(s: f64) -> Result<f64> {
    check_unit("s", s)?;
    let r = 1.0 - s;
    Ok((4.0 * s * s + 6.0 * s * r + 11.0 / 3.0 * r * r).sqrt() - 1.0)
}

/// `E_T` of `a1|00> + a2|01> + a3|10> + a4|11>`.
pub fn two_qubit_closed_form(a: [C64; 4]) -> Result<f64> {
    let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(contract(format!("two-qubit amplitudes have norm^2 {norm}")));
    }
    let d = (a[1] * a[2]).norm() - (a[0] * a[3]).norm();
    Ok((1.0 + 8.0 * d * d).sqrt() - 1.0)
}

/// Same quantity through the determinant, `sqrt(1 + 8|a1 a4 - a2 a3|^2) - 1`.
/// Agrees with [`two_qubit_closed_form`] only when `a1 a4` and `a2 a3` share
/// a complex phase (or either vanishes).
pub fn two_qubit_determinant_form(a: [C64; 4]) -> Result<f64> {
    let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(contract(format!("two-qubit amplitudes have norm^2 {norm}")));
    }
    let d = (a[0] * a[3] - a[1] * a[2]).norm();
    Ok((1.0 + 8.0 * d * d).sqrt() - 1.0)
}

/// `sqrt(1 + 2C^2) - 1` with `C = 2 sqrt(p(1-p))`, the two-qubit GHZ value
/// written through the concurrence.
pub fn concurrence_relation(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    let c = 2.0 * (p * (1.0 - p)).sqrt();
    Ok((1.0 + 2.0 * c * c).sqrt() - 1.0)
}

/// Lower bound on `||T^(3)||^2` for a three-qubit state in generalized
/// Schmidt form `l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>`.
pub fn schmidt3_lower_bound(lambda: [f64; 5]) -> f64 {
    let [l0, l1, l2, l3, l4] = lambda;
    let cross = l1 * l4 - l2 * l3;
    1.0 + 12.0 * (l0 * l4).powi(2) + 8.0 * (l0 * l2).powi(2) + 8.0 * (l0 * l3).powi(2) + 8.0 * cross * cross
}

/// Printed closed-form expression for `||T^(N)||^2` of the weight-`s` Dicke
/// state. Known to disagree with the tensor; use only for comparison.
pub fn heisenberg_norm_formula(n: usize, s: usize) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("formula needs even N, got {n}")));
    }
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds N = {n}")));
    }
    let mut sum = 0.0;
    for x in (0..=n).step_by(2) {
        for y in (0..=n - x).step_by(2) {
            let h = (x + y) / 2;
            if x + y < 2 || x + y > 2 * s || s - h > n - x - y {
                continue;
            }
            let bracket = 2.0 * binomial(x, x / 2) * binomial(y, y / 2) - binomial(x + y, h);
            let tail = binomial(n - x - y, s - h);
            sum += (bracket * tail).powi(2) * binomial(n, x) * binomial(n - x, y);
        }
    }
    Ok(1.0 + sum / binomial(n, s).powi(2))
}

/// Formula value next to the tensor value, with a mismatch marker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaComparison {
    pub n_qubits: usize,
    pub excitations: usize,
    pub formula_norm_sqr: f64,
    pub tensor_norm_sqr: f64,
    pub mismatch: bool,
}

/// Relative tolerance before [`FormulaComparison::mismatch`] is set.
pub const FORMULA_MISMATCH_TOL: f64 = 1e-9;

pub fn compare_heisenberg_formula(n: usize, s: usize) -> Result<FormulaComparison> {
    let formula = heisenberg_norm_formula(n, s)?;
    let tensor = symmetric_correlations(&DickeSuperposition::dicke(n, s)?)?.norm_sqr();
    Ok(FormulaComparison {
        n_qubits: n,
        excitations: s,
        formula_norm_sqr: formula,
        tensor_norm_sqr: tensor,
        mismatch: (formula - tensor).abs() > FORMULA_MISMATCH_TOL * tensor.max(1.0),
    })
}

/// `E_T(psi_N(N/2)) / R_N` through the Dicke-basis path.
pub fn dicke_ratio(n: usize) -> Result<f64> {
    if n % 2 == 1 || n < 2 {
        return Err(Error::InvalidParameter(format!("ratio needs even N >= 2, got {n}")));
    }
    let d = DickeSuperposition::dicke(n, n / 2)?;
    let t = symmetric_correlations(&d)?;
    Ok((t.norm() - 1.0) / r_n(n)?)
}

/// Evaluates any symmetric oracle's norm; handy for custom Dicke mixtures.
pub fn symmetric_norm<O: SymmetricOracle + ?Sized>(oracle: &O) -> Result<f64> {
    Ok(symmetric_correlations(oracle)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_n_values() {
        assert!((r_n(2).unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((r_n(3).unwrap() - 1.0).abs() < 1e-12);
        assert!((r_n(4).unwrap() - 2.0).abs() < 1e-12);
        assert!(r_n(1).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(ghz_closed_form(0.0, 5).unwrap(), 0.0);
        assert!((ghz_closed_form(0.5, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!((ghz_closed_form(0.5, 2).unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(ghz_closed_form(1.5, 3).is_err());
        assert!((w_closed_form(3).unwrap() - ((11.0f64 / 3.0).sqrt() - 1.0)).abs() < 1e-12);
        assert!((w_closed_form(4).unwrap() - 1.0).abs() < 1e-12);
        assert!(w_closed_form(2).is_err());
        assert!((wghz_closed_form(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((wghz_closed_form(0.0).unwrap() - w_closed_form(3).unwrap()).abs() < 1e-12);
        assert!((concurrence_relation(0.25).unwrap() - (2.5f64.sqrt() - 1.0)).abs() < 1e-12);
        for p in [0.0, 0.1, 0.5, 0.77, 1.0] {
            let a = concurrence_relation(p).unwrap();
            let b = ghz_closed_form(p, 2).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn w_limit_is_monotone() {
        let vals: Vec<f64> = (3..=50).map(|n| w_closed_form(n).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(*vals.last().unwrap() < 5f64.sqrt() - 1.0);
    }

    #[test]
    fn two_qubit_examples() {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        assert_eq!(two_qubit_closed_form([o, z, z, z]).unwrap(), 0.0);
        let h = C64::new(0.5f64.sqrt(), 0.0);
        assert!((two_qubit_closed_form([h, z, z, h]).unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(two_qubit_closed_form([o, o, z, z]).is_err());
        // |a2 a3| = |a1 a4| for a positive product state
        let q = C64::new(0.5, 0.0);
        assert_eq!(two_qubit_closed_form([q, q, q, q]).unwrap(), 0.0);
        // equal moduli but opposite sign: entangled, the printed form misses it
        let bell_like = [q, q, q, -q];
        assert_eq!(two_qubit_closed_form(bell_like).unwrap(), 0.0);
        assert!((two_qubit_determinant_form(bell_like).unwrap() - (3f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn heisenberg_formula_edges() {
        assert_eq!(heisenberg_norm_formula(6, 0).unwrap(), 1.0);
        assert!(heisenberg_norm_formula(5, 2).is_err());
        assert!((heisenberg_norm_formula(4, 2).unwrap() - 9.0).abs() < 1e-9);
    }

    #[test]
    fn heisenberg_formula_vs_tensor() {
        assert!(!compare_heisenberg_formula(4, 2).unwrap().mismatch);
        assert!(!compare_heisenberg_formula(6, 3).unwrap().mismatch);
        let c = compare_heisenberg_formula(8, 4).unwrap();
        assert!(c.mismatch);
        assert!((c.tensor_norm_sqr - 711.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn report_json_fields() {
        let r = MeasureReport::from_norm(2.0, 3, true, Duration::from_millis(5));
        let v = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(keys, ["e_t", "e_t_log", "elapsed_ms", "n_qubits", "norm", "normalized"]);
        assert_eq!(v["normalized"], 1.0);
        assert_eq!(v["elapsed_ms"], 5.0);
        let back: MeasureReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
