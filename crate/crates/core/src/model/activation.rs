//! Equilibrium of a single receptor on the binding ladder with `B` held fixed.

use super::{ChainRates, ModelError};

/// Upper bound on `B` searched by [`estimate_threshold`].
pub const DEFAULT_THRESHOLD_CAP: f64 = 1e6;

/// Probability that one receptor sits in the fully bound (active) state
/// when `B` is buffered at `n_b`.
///
/// Detailed balance on the ladder gives `w_{i+1} / w_i = k_plus n_b / k_off(i)`
/// with `k_off = k_minus` below the top rung and `k_minus_last` into it.
pub fn activation_equilibrium(m: usize, rates: &ChainRates, n_b: f64) -> f64 {
    if n_b <= 0.0 || m == 0 || rates.k_plus == 0.0 {
        return 0.0;
    }
    // Log weights keep long ladders and large n_b finite.
    let mut logw = Vec::with_capacity(m + 1);
    logw.push(0.0);
    for i in 0..m {
        let off = if i + 1 == m {
            rates.k_minus_last
        } else {
            rates.k_minus
        };
        let step = if off == 0.0 {
            f64::INFINITY
        } else {
            (rates.k_plus * n_b / off).ln()
        };
        logw.push(logw[i] + step);
    }
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return if logw[m].is_infinite() { 1.0 } else { 0.0 };
    }
    let z: f64 = logw.iter().map(|l| (l - max).exp()).sum();
    (logw[m] - max).exp() / z
}

/// `B` level at half-maximal activation, plus the two ratio heuristics
/// `k_plus / k_minus` and `k_minus / k_plus` for comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdEstimate {
    pub theta: f64,
    pub plus_over_minus: f64,
    pub minus_over_plus: f64,
}

/// Bisects `activation_equilibrium = 1/2` on `[0, cap]` to absolute
/// tolerance `1e-6`.
pub fn estimate_threshold(m: usize, rates: &ChainRates, cap: f64) -> Result<ThresholdEstimate, ModelError> {
    let p = |n: f64| activation_equilibrium(m, rates, n);
    if !(cap > 0.0) || p(cap) < 0.5 {
        return Err(ModelError::ThresholdNotReached { cap });
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdEstimate {
        theta: 0.5 * (lo + hi),
        plus_over_minus: rates.k_plus / rates.k_minus,
        minus_over_plus: rates.k_minus / rates.k_plus,
    })
}

/// Log-log slope of `P / (1 - P)` against `B` at the threshold: the Hill
/// coefficient of the ladder's activation curve.
pub fn effective_hill_exponent(m: usize, rates: &ChainRates) -> Result<f64, ModelError> {
    let theta = estimate_threshold(m, rates, DEFAULT_THRESHOLD_CAP)?.theta;
    let logit = |n: f64| {
        let p = activation_equilibrium(m, rates, n);
        (p / (1.0 - p)).ln()
    };
    let h = 1e-4;
    let up = theta * (1.0 + h);
    let down = theta * (1.0 - h);
    Ok((logit(up) - logit(down)) / (up.ln() - down.ln()))
}
