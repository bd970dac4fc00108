#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// zeta(k) - 1 for k = 2..=30
const ZETA_MINUS_ONE: [f64; 29] = [
    6.4493406684822644e-1,
    2.0205690315959429e-1,
    8.2323233711138192e-2,
    3.6927755143369926e-2,
    1.734306198444914e-2,
    8.3492773819228268e-3,
    4.0773561979443394e-3,
    2.0083928260822144e-3,
    9.9457512781808534e-4,
    4.9418860411946456e-4,
    2.460865533080483e-4,
    1.2271334757848915e-4,
    6.1248135058704829e-5,
    3.0588236307020494e-5,
    1.5282259408651872e-5,
    7.6371976378997623e-6,
    3.8172932649998399e-6,
    1.9082127165539389e-6,
    9.5396203387279611e-7,
    4.7693298678780646e-7,
    2.3845050272773299e-7,
    1.1921992596531107e-7,
    5.960818905125948e-8,
    2.980350351465228e-8,
    1.4901554828365041e-8,
    7.4507117898354295e-9,
    3.7253340247884571e-9,
    1.862659723513049e-9,
    9.3132743241966818e-10,
];

/// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// ln Γ(1 + z) for |z| ≤ 1/2 from the zeta series, split so that the
/// leading terms are computed with `ln_1p` and no cancellation.
fn ln_gamma_1p_small(z: f64) -> f64 {
    let mut acc = 0.0;
    let mut zk = z * z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        let term = c * zk / k;
        acc += if i % 2 == 0 { term } else { -term };
        zk *= z;
    }
    -EULER_GAMMA * z + (z - z.ln_1p()) + acc
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if x <= 2.5 {
        // Γ(x) = (x - 1) Γ(x - 1); ln(x-1) and lnΓ(x-1) share sign near x = 2
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_small(z);
    }
    if x <= 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return prod.ln() + ln_gamma_pos(y);
    }
    ln_gamma_stirling(x)
}

/// ln n! computed exactly through 20! and through `log_gamma` beyond.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 20 {
        ((1..=n).product::<u64>() as f64).ln()
    } else {
        ln_gamma_pos(n as f64 + 1.0)
    }
}

/// ln C(n, k) for integers, exact integer arithmetic while it fits.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
            }
        }
    }
    (acc as f64).ln()
}

/// ln of the generalized binomial Γ(top + 1) / (Γ(k + 1) Γ(top - k + 1)) for
/// real `top > k - 1`.
pub fn log_binomial_real(top: f64, k: u64) -> f64 {
    ln_gamma_pos(top + 1.0) - log_factorial(k) - ln_gamma_pos(top - k as f64 + 1.0)
}
