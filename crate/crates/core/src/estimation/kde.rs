//! Gaussian kernel density estimates and rejection sampling from them.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{AuctionError, Result};

use super::quantile::{interquartile_range, sample_std_dev, sorted_copy};
use super::ItemBounds;

/// Hard cap on proposals per call to [`DensityEstimate::sample_truncated`].
pub const MAX_PROPOSALS: u64 = 10_000_000;

// Kernel terms beyond this many bandwidths are below 3e-18 of the peak.
const KERNEL_CUTOFF: f64 = 9.0;

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// Standard normal kernel.
#[inline]
pub fn gaussian_kernel(t: f64) -> f64 {
    inv_sqrt_2pi() * (-0.5 * t * t).exp()
}

/// Rule-of-thumb bandwidth `1.06 * min(sd, iqr / 1.34) * n^(-1/5)`.
pub fn rule_of_thumb(sd: f64, iqr: f64, n: usize) -> f64 {
    1.06 * sd.min(iqr / 1.34) * (n as f64).powf(-0.2)
}

/// Bandwidth for `samples`, falling back to a small fraction of the support
/// width when the sample spread is zero.
pub fn compute_bandwidth(samples: &[f64], support: ItemBounds) -> Result<f64> {
    if samples.is_empty() {
        return Err(AuctionError::invalid("bandwidth needs at least one sample"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(AuctionError::invalid("samples must be finite"));
    }
    let sorted = sorted_copy(samples);
    let h = rule_of_thumb(sample_std_dev(samples), interquartile_range(&sorted), samples.len());
    if h > 0.0 {
        Ok(h)
    } else {
        Ok(degenerate_bandwidth(support))
    }
}

pub fn degenerate_bandwidth(support: ItemBounds) -> f64 {
    (1e-3 * support.width()).max(1e-9)
}

/// A one-dimensional Gaussian KDE with its item's value support.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    points: Vec<f64>,
    bandwidth: f64,
    support: ItemBounds,
}

impl DensityEstimate {
    pub fn new(points: &[f64], bandwidth: f64, support: ItemBounds) -> Result<Self> {
        if points.is_empty() {
            return Err(AuctionError::invalid("density estimate needs sample points"));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(AuctionError::invalid(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(AuctionError::invalid("sample points must be finite"));
        }
        Ok(DensityEstimate {
            points: sorted_copy(points),
            bandwidth,
            support,
        })
    }

    /// Fits the estimate with the rule-of-thumb bandwidth.
    pub fn fit(samples: &[f64], support: ItemBounds) -> Result<Self> {
        let h = compute_bandwidth(samples, support)?;
        Self::new(samples, h, support)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn support(&self) -> ItemBounds {
        self.support
    }

    /// Sample points, sorted ascending.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Density at `x`, summing every kernel term.
    pub fn evaluate(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self.points.iter().map(|p| gaussian_kernel((x - p) / h)).sum();
        sum / (self.points.len() as f64 * h)
    }

    /// Density at `x` using only the points within the kernel cutoff.
    pub(crate) fn evaluate_near(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let reach = KERNEL_CUTOFF * h;
        let start = self.points.partition_point(|&p| p < x - reach);
        let mut sum = 0.0;
        for &p in &self.points[start..] {
            if p > x + reach {
                break;
            }
            sum += gaussian_kernel((x - p) / h);
        }
        sum / (self.points.len() as f64 * h)
    }

    /// `K(0) / h`, an upper bound on the density everywhere.
    pub fn supremum_bound(&self) -> f64 {
        inv_sqrt_2pi() / self.bandwidth
    }

    /// Constant `c` such that `c * g(x)` dominates the density on the support,
    /// with `g` the uniform density on the support.
    pub fn rejection_constant(&self) -> f64 {
        self.support.width() * self.supremum_bound()
    }

    /// Upper bound of [`Self::evaluate_near`] over `[lo, hi]`: every kernel
    /// that can reach the bin, taken at its closest point.
    fn bin_cap(&self, lo: f64, hi: f64) -> f64 {
        let h = self.bandwidth;
        let reach = KERNEL_CUTOFF * h;
        let start = self.points.partition_point(|&p| p < lo - reach);
        let mut sum = 0.0;
        for &p in &self.points[start..] {
            if p > hi + reach {
                break;
            }
            let gap = (lo - p).max(p - hi).max(0.0);
            sum += gaussian_kernel(gap / h);
        }
        sum / (self.points.len() as f64 * h)
    }

    /// Draws `count` values from the estimate truncated to its support, by
    /// proposing uniformly on the support and accepting with probability
    /// `D(x) / (c g(x))`.
    ///
    /// Proposals are first screened against a per-bin cap on the density;
    /// a proposal whose acceptance threshold already exceeds the cap is
    /// rejected without evaluating the full kernel sum. Decisions are the
    /// same as without the screen.
    pub fn sample_truncated<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(AuctionError::invalid("sample count must be positive"));
        }
        let ItemBounds { lower, upper } = self.support;
        let width = upper - lower;
        let envelope = self.rejection_constant() / width;

        let bins = ((8.0 * width / self.bandwidth).ceil() as usize).clamp(16, 8192);
        let bin_width = width / bins as f64;
        let slack = 1e-9 * bin_width;
        let caps: Vec<f64> = (0..bins)
            .map(|b| {
                let lo = lower + b as f64 * bin_width;
                self.bin_cap(lo - slack, lo + bin_width + slack) * (1.0 + 1e-9)
            })
            .collect();

        let mut out = Vec::with_capacity(count);
        let mut proposals = 0u64;
        while out.len() < count {
            if proposals >= MAX_PROPOSALS {
                return Err(AuctionError::SamplingFailure {
                    proposals,
                    accepted: out.len(),
                    requested: count,
                });
            }
            proposals += 1;
            let x = lower + width * rng.random::<f64>();
            let u: f64 = rng.random();
            let level = u * envelope;
            let bin = (((x - lower) / bin_width) as usize).min(bins - 1);
            if level >= caps[bin] {
                continue;
            }
            if level < self.evaluate_near(x) {
                out.push(x);
            }
        }
        Ok(out)
    }
}
