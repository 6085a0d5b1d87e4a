use clap::Args;
use corrtensor::families::Family;
use corrtensor::measure::{e_t_dicke, e_t_with, MeasureOptions};
use corrtensor::tensor::symmetric::DickeSuperposition;
use serde::Serialize;

use crate::{emit, fmt_num, to_json, CliError, CliResult, FamilyArgs, Format, Global};

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// A family name, or `dicke-ratio` for E_T(D_N^{N/2}) / R_N over even N.
    target: String,
    /// Swept parameter: p, s, phi, m or n. Defaults per family.
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    /// Grid points for continuous parameters.
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    params: FamilyArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Param {
    P,
    S,
    Phi,
    M,
    N,
}

impl Param {
    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "p" => Ok(Param::P),
            "s" => Ok(Param::S),
            "phi" => Ok(Param::Phi),
            "m" => Ok(Param::M),
            "n" | "qubits" => Ok(Param::N),
            other => Err(CliError::Usage(format!("unknown sweep parameter '{other}'"))),
        }
    }

    fn integral(self, family: Family) -> bool {
        matches!(self, Param::M | Param::N) || (family == Family::Dicke && self == Param::S)
    }
}

#[derive(Serialize)]
struct Row {
    param: f64,
    e_t: f64,
    e_t_normalized: f64,
}

fn default_param(family: Family) -> CliResult<Param> {
    Ok(match family {
        Family::Ghz => Param::P,
        Family::W | Family::WTilde => Param::N,
        Family::WSup | Family::GhzW | Family::Dicke => Param::S,
        Family::HeisK => Param::M,
        Family::Schmidt3 => Param::Phi,
        Family::Bai => return Err(CliError::Usage("bai has no parameter to sweep".into())),
    })
}

fn default_range(family: Family, param: Param, qubits: usize) -> (f64, f64) {
    match (family, param) {
        (_, Param::P) | (_, Param::S) if family != Family::Dicke => (0.0, 1.0),
        (Family::Dicke, Param::S) => (0.0, qubits as f64),
        (_, Param::Phi) => (0.0, std::f64::consts::TAU),
        (_, Param::M) => (0.0, (qubits - 1) as f64),
        (Family::Ghz, Param::N) => (2.0, 12.0),
        (Family::Dicke, Param::N) => (2.0, 20.0),
        _ => (3.0, 8.0),
    }
}

fn grid(from: f64, to: f64, steps: usize, integral: bool) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || from > to {
        return Err(CliError::Usage(format!("grid [{from}, {to}] is empty or not increasing")));
    }
    if integral {
        if from.fract() != 0.0 || to.fract() != 0.0 || from < 0.0 {
            return Err(CliError::Usage("integer parameters need integer bounds".into()));
        }
        return Ok((from as usize..=to as usize).map(|k| k as f64).collect());
    }
    if steps == 0 {
        return Err(CliError::Usage("grid needs at least one point".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let h = (to - from) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { to } else { from + h * i as f64 }).collect())
}

fn dicke_row(n: usize, s: usize) -> CliResult<(f64, f64)> {
    let rep = e_t_dicke(&DickeSuperposition::dicke(n, s)?, true)?;
    Ok((rep.e_t, rep.normalized.unwrap_or(f64::NAN)))
}

fn point(family: Family, param: Param, x: f64, args: &SweepArgs, cap: usize) -> CliResult<(f64, f64)> {
    let mut params = args.params.params();
    match param {
        Param::P => params.p = Some(x),
        Param::S => params.s = Some(x),
        Param::Phi => params.phi = x,
        Param::M => params.m = Some(x as usize),
        Param::N => params.qubits = Some(x as usize),
    }
    // Dicke states go through the Dicke-basis path, which reaches N = 128
    if family == Family::Dicke {
        let n = params.qubits.unwrap_or(20);
        let s = params.s.unwrap_or((n / 2) as f64);
        if s < 0.0 || s.fract() != 0.0 {
            return Err(CliError::Usage(format!("Dicke excitation number must be an integer, got {s}")));
        }
        return dicke_row(n, s as usize);
    }
    let state = family.build(&params)?;
    let rep = e_t_with(&state, MeasureOptions { cap, normalize: true })?;
    Ok((rep.e_t, rep.normalized.unwrap_or(f64::NAN)))
}

pub fn run(g: &Global, args: &SweepArgs) -> CliResult<()> {
    let rows = if args.target == "dicke-ratio" {
        let from = args.from.unwrap_or(2.0);
        let to = args.to.unwrap_or(100.0);
        grid(from, to, 0, true)?
            .into_iter()
            .filter(|n| (*n as usize).is_multiple_of(2) && *n >= 2.0)
            .map(|n| {
                let n = n as usize;
                let (e, norm) = dicke_row(n, n / 2)?;
                Ok(Row { param: n as f64, e_t: e, e_t_normalized: norm })
            })
            .collect::<CliResult<Vec<_>>>()?
    } else {
        let family: Family = args
            .target
            .parse()
            .map_err(|e: corrtensor::Error| CliError::Usage(e.to_string()))?;
        let param = match &args.param {
            Some(p) => Param::parse(p)?,
            None => default_param(family)?,
        };
        let qubits = args.params.qubits.unwrap_or(if family == Family::Dicke { 20 } else { 4 });
        let (lo, hi) = default_range(family, param, qubits);
        let xs = grid(args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.steps.unwrap_or(101), param.integral(family))?;
        xs.into_iter()
            .map(|x| {
                let (e, norm) = point(family, param, x, args, g.max_qubits)?;
                Ok(Row { param: x, e_t: e, e_t_normalized: norm })
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    if rows.is_empty() {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    let body = match g.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("param,e_t,e_t_normalized\n");
            for r in &rows {
                out.push_str(&format!("{},{},{}\n", fmt_num(r.param), fmt_num(r.e_t), fmt_num(r.e_t_normalized)));
            }
            out
        }
    };
    emit(g.out.as_deref(), &body)
}
