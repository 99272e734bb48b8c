//! Empirical quantiles by order statistic.
//!
//! The p-quantile of `n` sorted values is the `k`-th order statistic with
//! `k = ceil(n * p)` clamped to `[1, n]`, i.e. the smallest sample value whose
//! empirical CDF reaches `p`.

use crate::error::{AuctionError, Result};

use super::Interval;

// Absorbs representation error in products like 1000 * 0.995.
const RANK_SLACK: f64 = 1e-9;

/// 1-based rank of the empirical `p`-quantile among `n` values.
pub fn quantile_rank(n: usize, p: f64) -> usize {
    debug_assert!(n > 0);
    let k = (p * n as f64 - RANK_SLACK).ceil();
    if k < 1.0 {
        1
    } else {
        (k as usize).min(n)
    }
}

/// Empirical `p`-quantile of already sorted values.
pub fn sorted_quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[quantile_rank(sorted.len(), p) - 1]
}

pub(crate) fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Interquartile range `Q3 - Q1` of sorted values.
pub fn interquartile_range(sorted: &[f64]) -> f64 {
    sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25)
}

/// Sample standard deviation with the `n - 1` denominator; zero for a single value.
pub fn sample_std_dev(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Two-sided `(1 - alpha)` interval from the `alpha/2` and `1 - alpha/2`
/// empirical quantiles of `samples`.
pub fn confidence_interval(samples: &[f64], alpha: f64) -> Result<Interval> {
    if samples.len() < 2 {
        return Err(AuctionError::invalid(format!(
            "confidence interval needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(AuctionError::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(AuctionError::invalid("samples must be finite"));
    }
    let sorted = sorted_copy(samples);
    Ok(Interval {
        lower: sorted_quantile(&sorted, alpha / 2.0),
        upper: sorted_quantile(&sorted, 1.0 - alpha / 2.0),
    })
}
