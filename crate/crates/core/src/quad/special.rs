use std::f64::consts::PI;

use crate::error::{domain, Result};

const ZETA_DIRECT_TERMS: usize = 20;

/// `B_2k / (2k)!` for k = 1..4.
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
];

/// Riemann zeta function for real `s > 1`.
///
/// Twenty direct terms followed by an Euler–Maclaurin tail with four
/// Bernoulli corrections, which is good to about 1e-15 relative for s ≥ 2.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(domain("s", s, "zeta needs s > 1"));
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    let n = ZETA_DIRECT_TERMS as f64;
    let mut sum = 0.0;
    // small terms first
    for k in (1..ZETA_DIRECT_TERMS).rev() {
        sum += (k as f64).powf(-s);
    }
    let n_pow = n.powf(-s);
    let mut tail = n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s (s+1) ... (s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n_pow / n;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += coeff * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    Ok(sum + tail)
}

/// Dilogarithm `Li2(x) = sum x^k / k^2` on `[0, 1]`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "dilog is implemented on [0, 1]"));
    }
    if x == 1.0 {
        return Ok(PI * PI / 6.0);
    }
    if x <= 0.5 {
        return Ok(dilog_series(x));
    }
    let w = 1.0 - x;
    Ok(PI * PI / 6.0 - x.ln() * w.ln() - dilog_series(w))
}

fn dilog_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut power = x;
    let mut k = 1.0;
    loop {
        let term = power / (k * k);
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
        power *= x;
        k += 1.0;
    }
}
