//! Sample-size formulas for the RC-set estimator.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Below this many factors `ln C(a, b)` is summed term by term.
const DIRECT_SUM_LIMIT: u64 = 1_000_000;

/// `ln C(a, b)`.
pub fn log_binom(a: u64, b: u64) -> Result<f64> {
    if b > a {
        return Err(Error::Invalid(format!("binomial C({a}, {b}) with b > a")));
    }
    let b = b.min(a - b);
    if b == 0 {
        return Ok(0.0);
    }
    if b <= DIRECT_SUM_LIMIT {
        // Every ratio is at least 2, so no term loses precision near ln 1.
        let base = a - b;
        return Ok((1..=b).map(|j| ((base + j) as f64 / j as f64).ln()).sum());
    }
    Ok(ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0))
}

/// `ln C(n h, k)` with `k` capped at the ground-set size.
fn log_subsets(n: usize, h: usize, k: usize) -> f64 {
    let ground = n as u64 * h as u64;
    log_binom(ground, (k as u64).min(ground)).expect("k capped at ground set size")
}

/// Sample size numerator `λ` such that `λ / OPT` sets give the accuracy the
/// greedy phase needs.
pub fn lambda_bound(n: usize, h: usize, k: usize, epsilon: f64, ell_conf: f64) -> f64 {
    let n_f = n as f64;
    4.0 * n_f * (2.0 * epsilon + 12.0) * (log_subsets(n, h, k) + ell_conf * n_f.ln() + 2f64.ln())
        / (3.0 * epsilon * epsilon)
}

/// Sample size for the lower-bound test at guess `x`.
pub fn theta_i(n: usize, h: usize, k: usize, epsilon: f64, ell_conf: f64, x: f64) -> f64 {
    let n_f = n as f64;
    (4.0 / 3.0 * epsilon + 4.0)
        * (log_subsets(n, h, k) + ell_conf * n_f.ln() + (2.0 * n_f).log2().ln())
        / (epsilon * epsilon)
        * (n_f / x)
}
