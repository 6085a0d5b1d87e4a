//! Small numeric helpers shared across modules: pairwise summation and
//! binomial coefficients.

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (cascade) summation. The split points depend only on the slice
/// length, so the result is reproducible for a given input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of squares.
pub fn pairwise_sum_sq(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().map(|v| v * v).sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_sq(&values[..mid]) + pairwise_sum_sq(&values[mid..])
}

/// Pairwise sum of `|z|^2` over complex amplitudes.
pub fn pairwise_norm_sqr(values: &[num_complex::Complex64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().map(|v| v.norm_sqr()).sum();
    }
    let mid = values.len() / 2;
    pairwise_norm_sqr(&values[..mid]) + pairwise_norm_sqr(&values[mid..])
}

/// Exact binomial coefficient. Valid while the result fits in `u128`
/// (all `n <= 128`).
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient as `f64`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 128 {
        return binomial_u128(n, k) as f64;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of distinct arrangements of `a` ones, `b` twos and `c` threes.
pub fn multinomial3(a: usize, b: usize, c: usize) -> f64 {
    binomial(a + b + c, a) * binomial(b + c, b)
}

pub fn pow3(exp: usize) -> usize {
    3usize.pow(exp as u32)
}

pub fn pow4(exp: usize) -> usize {
    4usize.pow(exp as u32)
}
