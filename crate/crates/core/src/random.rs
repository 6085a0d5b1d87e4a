//! Seeded sampling of random states, unitaries and Kraus pairs.
//!
//! Every sampler takes an explicit RNG. [`trial_rng`] derives independent
//! per-trial generators from one master seed, so parallel trials stay
//! reproducible regardless of scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::state::{KrausSet, LocalOperator, Matrix2, PureState};

pub type TrialRng = ChaCha8Rng;

pub fn master_rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` under `master`; distinct trials use distinct
/// ChaCha streams.
pub fn trial_rng(master: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    let amps = (0..1usize << n).map(|_| gaussian(rng)).collect();
    PureState::from_unnormalized(n, amps)
}

/// Haar-random `dim x dim` unitary: QR of a complex Gaussian matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let (mut q, r) = g.qr().unpack();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    q
}

pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
    let u = haar_unitary(2, rng);
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

/// Random single-qubit gate on `qubit`.
pub fn random_local_unitary<R: Rng + ?Sized>(qubit: usize, rng: &mut R) -> Result<LocalOperator> {
    LocalOperator::unitary(qubit, haar_unitary2(rng))
}

/// One random gate per qubit, qubit 1 first.
pub fn random_unitary_layer<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<LocalOperator>> {
    (1..=n).map(|q| random_local_unitary(q, rng)).collect()
}

/// Product of Haar-random single-qubit states.
pub fn random_product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    let factors: Vec<[C64; 2]> = (0..n)
        .map(|_| {
            let a = gaussian(rng);
            let b = gaussian(rng);
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            [a / norm, b / norm]
        })
        .collect();
    PureState::product(&factors)
}

/// `{diag(a, b), diag(sqrt(1-a^2), sqrt(1-b^2))}` with `a, b` uniform on [0, 1].
pub fn random_diagonal_kraus<R: Rng + ?Sized>(qubit: usize, rng: &mut R) -> Result<KrausSet> {
    KrausSet::diagonal_pair(qubit, rng.random::<f64>(), rng.random::<f64>())
}

/// A random diagonal pair conjugated into a Haar-random frame.
pub fn random_framed_kraus<R: Rng + ?Sized>(qubit: usize, rng: &mut R) -> Result<KrausSet> {
    let base = random_diagonal_kraus(qubit, rng)?;
    base.in_frame(&haar_unitary2(rng))
}
