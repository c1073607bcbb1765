//! Log-gamma and log-binomial evaluation.

use num_bigint::BigUint;

use crate::scalar::stable_sum;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling series coefficients `B_{2k} / (2k (2k-1))` for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN: f64 = 15.0;

/// Exact factorials that fit in `u64`.
const SMALL_FACTORIALS: [u64; 21] = {
    let mut table = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// Natural log of the gamma function for `x > 0`.
///
/// Integer arguments up to 21 go through exact factorials. Everything else
/// uses the Stirling series with 8 correction terms, shifting small
/// arguments up past 15 first.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs x > 0, got {x}");
    if x.fract() == 0.0 && x <= 21.0 {
        return (SMALL_FACTORIALS[x as usize - 1] as f64).ln();
    }
    if x < STIRLING_MIN {
        let shift = (STIRLING_MIN - x).ceil();
        let mut prod = 1.0;
        let mut y = x;
        while y < x + shift {
            prod *= y;
            y += 1.0;
        }
        return stirling(x + shift) - prod.ln();
    }
    stirling(x)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
///
/// Narrow binomials are summed term by term to avoid cancelling large
/// log-gammas.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= 64 {
        return stable_sum((0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()));
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Natural log of an arbitrary-precision integer. `-inf` for zero.
pub fn big_ln(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let v: u64 = value.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top = (value >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
