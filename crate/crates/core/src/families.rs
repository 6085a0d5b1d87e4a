//! Named state families and a registry addressable by short names.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::binomial;
use crate::state::{qubit_bit, PureState, NORM_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")))
    }
}

fn check_min_qubits(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        Err(Error::InvalidParameter(format!("{what} needs N >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// `sqrt(p)|0..0> + sqrt(1-p)|1..1>`.
pub fn ghz_state(p: f64, n: usize) -> Result<PureState> {
    check_unit("p", p)?;
    check_min_qubits(n, 2, "GHZ")?;
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = C64::new(p.sqrt(), 0.0);
    amps[(1 << n) - 1] = C64::new((1.0 - p).sqrt(), 0.0);
    PureState::new(n, amps)
}

/// Uniform superposition of the single-excitation basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    check_min_qubits(n, 3, "W")?;
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; 1 << n];
    for q in 1..=n {
        amps[qubit_bit(n, q)] = a;
    }
    PureState::new(n, amps)
}

/// Uniform superposition of the single-hole basis states.
pub fn w_tilde_state(n: usize) -> Result<PureState> {
    check_min_qubits(n, 3, "W-tilde")?;
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let all = (1 << n) - 1;
    let mut amps = vec![ZERO; 1 << n];
    for q in 1..=n {
        amps[all ^ qubit_bit(n, q)] = a;
    }
    PureState::new(n, amps)
}

/// `sqrt(s)|W> + sqrt(1-s) e^{i phi}|W~>`.
pub fn w_superposition(s: f64, phi: f64, n: usize) -> Result<PureState> {
    check_unit("s", s)?;
    let w = w_state(n)?;
    let wt = w_tilde_state(n)?;
    let b = C64::from_polar((1.0 - s).sqrt(), phi);
    let amps = w
        .amplitudes()
        .iter()
        .zip(wt.amplitudes())
        .map(|(x, y)| x * s.sqrt() + y * b)
        .collect();
    PureState::new(n, amps)
}

/// `sqrt(s)|GHZ_3> + sqrt(1-s) e^{i phi}|W_3>`.
pub fn ghz_w_superposition(s: f64, phi: f64) -> Result<PureState> {
    check_unit("s", s)?;
    let g = ghz_state(0.5, 3)?;
    let w = w_state(3)?;
    let b = C64::from_polar((1.0 - s).sqrt(), phi);
    let amps = g
        .amplitudes()
        .iter()
        .zip(w.amplitudes())
        .map(|(x, y)| x * s.sqrt() + y * b)
        .collect();
    PureState::new(3, amps)
}

/// One-magnon eigenstate `N^{-1/2} sum_j e^{ikj}|..1_j..>` with `k = 2 pi m / N`.
pub fn heisenberg_eigenstate(n: usize, m: usize) -> Result<PureState> {
    check_min_qubits(n, 2, "magnon state")?;
    if m >= n {
        return Err(Error::InvalidParameter(format!("m = {m} must be below N = {n}")));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut amps = vec![ZERO; 1 << n];
    for j in 1..=n {
        // reduce k*j mod 2pi in integers so m = 0 stays exactly real
        let phase = ((m * j) % n) as f64 * 2.0 * PI / n as f64;
        amps[qubit_bit(n, j)] = C64::from_polar(scale, phase);
    }
    PureState::new(n, amps)
}

/// Uniform superposition of all weight-`s` basis states.
pub fn dicke_state(n: usize, s: usize) -> Result<PureState> {
    check_min_qubits(n, 1, "Dicke")?;
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds N = {n}")));
    }
    if n > 30 {
        return Err(Error::ResourceLimit {
            what: "dense Dicke state",
            requested: n,
            cap: 30,
        });
    }
    let a = C64::new(1.0 / binomial(n, s).sqrt(), 0.0);
    let amps = (0..1usize << n)
        .map(|x| if x.count_ones() as usize == s { a } else { ZERO })
        .collect();
    PureState::new(n, amps)
}

/// `6^{-1/2}(|0000> + |0011> + |0101> + |0110> + |1010> + |1111>)`.
pub fn bai_state() -> Result<PureState> {
    let a = C64::new(1.0 / 6f64.sqrt(), 0.0);
    let mut amps = vec![ZERO; 16];
    for i in [0b0000, 0b0011, 0b0101, 0b0110, 0b1010, 0b1111] {
        amps[i] = a;
    }
    PureState::new(4, amps)
}

/// `l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>`.
pub fn schmidt3_state(lambda: [f64; 5], phi: f64) -> Result<PureState> {
    if lambda.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return Err(Error::InvalidParameter("Schmidt coefficients must be nonnegative".into()));
    }
    let norm: f64 = lambda.iter().map(|l| l * l).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidParameter(format!(
            "Schmidt coefficients have squared norm {norm}"
        )));
    }
    let mut amps = vec![ZERO; 8];
    amps[0b000] = C64::new(lambda[0], 0.0);
    amps[0b100] = C64::from_polar(lambda[1], phi);
    amps[0b101] = C64::new(lambda[2], 0.0);
    amps[0b110] = C64::new(lambda[3], 0.0);
    amps[0b111] = C64::new(lambda[4], 0.0);
    PureState::new(3, amps)
}

/// Registered family names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Ghz,
    W,
    WTilde,
    WSup,
    GhzW,
    HeisK,
    Dicke,
    Bai,
    Schmidt3,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Ghz,
        Family::W,
        Family::WTilde,
        Family::WSup,
        Family::GhzW,
        Family::HeisK,
        Family::Dicke,
        Family::Bai,
        Family::Schmidt3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::WTilde => "wtilde",
            Family::WSup => "wsup",
            Family::GhzW => "ghzw",
            Family::HeisK => "heis-k",
            Family::Dicke => "dicke",
            Family::Bai => "bai",
            Family::Schmidt3 => "schmidt3",
        }
    }

    /// Builds the family member described by `params`, filling defaults
    /// where a parameter is absent.
    pub fn build(self, params: &FamilyParams) -> Result<PureState> {
        let qubits = |default: usize| params.qubits.unwrap_or(default);
        match self {
            Family::Ghz => ghz_state(params.p.unwrap_or(0.5), qubits(3)),
            Family::W => w_state(qubits(3)),
            Family::WTilde => w_tilde_state(qubits(3)),
            Family::WSup => w_superposition(params.s.unwrap_or(0.5), params.phi, qubits(3)),
            Family::GhzW => {
                if qubits(3) != 3 {
                    return Err(Error::InvalidParameter("ghzw is defined for 3 qubits".into()));
                }
                ghz_w_superposition(params.s.unwrap_or(0.5), params.phi)
            }
            Family::HeisK => heisenberg_eigenstate(qubits(4), params.m.unwrap_or(0)),
            Family::Dicke => {
                let n = qubits(4);
                let s = params.s.unwrap_or((n / 2) as f64);
                if s < 0.0 || s.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "Dicke excitation number must be a nonnegative integer, got {s}"
                    )));
                }
                dicke_state(n, s as usize)
            }
            Family::Bai => {
                if qubits(4) != 4 {
                    return Err(Error::InvalidParameter("bai is defined for 4 qubits".into()));
                }
                bai_state()
            }
            Family::Schmidt3 => {
                let l = params.lambdas.ok_or_else(|| {
                    Error::InvalidParameter("schmidt3 needs five coefficients".into())
                })?;
                schmidt3_state(l, params.phi)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

/// Parameters for [`Family::build`]; which ones matter depends on the family.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FamilyParams {
    pub qubits: Option<usize>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub phi: f64,
    pub m: Option<usize>,
    pub lambdas: Option<[f64; 5]>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{e_t_value, w_closed_form};

    #[test]
    fn ghz_examples() {
        assert_eq!(ghz_state(1.0, 4).unwrap(), PureState::basis(4, 0).unwrap());
        let e = e_t_value(&ghz_state(0.5, 2).unwrap()).unwrap();
        assert!((e - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(ghz_state(-0.1, 3).is_err());
        assert!(ghz_state(0.5, 1).is_err());
    }

    #[test]
    fn w_family() {
        let w = w_state(3).unwrap();
        let wt = w_tilde_state(3).unwrap();
        assert_eq!(w.inner(&wt).unwrap().norm(), 0.0);
        let a = e_t_value(&w).unwrap();
        let b = e_t_value(&wt).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((e_t_value(&w_state(4).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(w_superposition(1.0, 0.3, 4).unwrap().max_abs_diff(&w_state(4).unwrap()), 0.0);
        assert!(w_state(2).is_err());
    }

    #[test]
    fn magnons_are_orthonormal_and_w_like() {
        let n = 5;
        let states: Vec<PureState> = (0..n).map(|m| heisenberg_eigenstate(n, m).unwrap()).collect();
        assert_eq!(states[0], w_state(n).unwrap());
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ip = a.inner(b).unwrap().norm();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
            let e = e_t_value(a).unwrap();
            assert!((e - w_closed_form(n).unwrap()).abs() < 1e-9);
        }
        assert!(heisenberg_eigenstate(4, 4).is_err());
    }

    #[test]
    fn dicke_and_bai() {
        assert_eq!(dicke_state(4, 0).unwrap(), PureState::basis(4, 0).unwrap());
        assert_eq!(dicke_state(3, 1).unwrap(), w_state(3).unwrap());
        assert!(dicke_state(3, 4).is_err());
        let b = bai_state().unwrap();
        assert!((b.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn schmidt3_product_conditions() {
        let e0 = e_t_value(&schmidt3_state([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap()).unwrap();
        assert!(e0.abs() < 1e-12);
        // l0 = 0 and l1 l4 = l2 l3
        let l = [0.0, 0.6, 0.4, 0.6, 0.4];
        let norm: f64 = l.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        let l = l.map(|x| x / norm);
        let e = e_t_value(&schmidt3_state(l, 0.0).unwrap()).unwrap();
        assert!(e.abs() < 1e-9, "{e}");
        // the relative phase re-entangles the last two qubits
        let e = e_t_value(&schmidt3_state(l, 0.4).unwrap()).unwrap();
        assert!(e > 1e-3);
        assert!(schmidt3_state([0.5; 5], 0.0).is_err());
    }

    #[test]
    fn registry_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
        let p = FamilyParams {
            qubits: Some(3),
            p: Some(0.5),
            ..Default::default()
        };
        assert_eq!(Family::Ghz.build(&p).unwrap(), ghz_state(0.5, 3).unwrap());
        assert!(Family::Schmidt3.build(&p).is_err());
        let d = FamilyParams {
            qubits: Some(4),
            s: Some(1.5),
            ..Default::default()
        };
        assert!(Family::Dicke.build(&d).is_err());
    }
}
