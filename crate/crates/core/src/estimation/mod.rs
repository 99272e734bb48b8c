//! Confidence intervals for bidder types from historical bids.
//!
//! For every bidder-item pair the historical bids are smoothed with a
//! Gaussian KDE, `sampling_count` draws are taken from the estimate truncated
//! to the item's value range, and the two tail quantiles of those draws form
//! the interval.

mod kde;
mod quantile;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AuctionError, Result};
use crate::grid::Grid;
use crate::rng::{stream, Purpose};

pub use kde::{
    compute_bandwidth, degenerate_bandwidth, gaussian_kernel, rule_of_thumb, DensityEstimate, MAX_PROPOSALS,
};
pub use quantile::{confidence_interval, interquartile_range, quantile_rank, sample_std_dev, sorted_quantile};

/// Known value range `[lower, upper]` of one item.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ItemBounds {
    pub lower: f64,
    pub upper: f64,
}

impl ItemBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(AuctionError::invalid(format!(
                "item bounds must satisfy a < b, got [{lower}, {upper}]"
            )));
        }
        Ok(ItemBounds { lower, upper })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Closed interval `[lower, upper]` around one bidder's type for one item.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper);
        Interval { lower, upper }
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Past bids `Γ_ij` of every bidder on every item, with item value ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoricalDataset {
    samples: Grid<Vec<f64>>,
    bounds: Vec<ItemBounds>,
}

impl HistoricalDataset {
    /// Validates shape, sample counts and that every bid lies in its item range.
    pub fn new(samples: Grid<Vec<f64>>, bounds: Vec<ItemBounds>) -> Result<Self> {
        if samples.bidders() < 2 {
            return Err(AuctionError::invalid("at least two bidders are required"));
        }
        if samples.items() == 0 || bounds.len() != samples.items() {
            return Err(AuctionError::invalid(format!(
                "expected bounds for {} items, got {}",
                samples.items(),
                bounds.len()
            )));
        }
        for (i, j, bids) in samples.iter() {
            if bids.is_empty() {
                return Err(AuctionError::invalid("no historical bids").at_pair(i, j));
            }
            if let Some(x) = bids.iter().find(|&&x| !bounds[j].contains(x)) {
                return Err(AuctionError::invalid(format!(
                    "bid {x} outside item range [{}, {}]",
                    bounds[j].lower, bounds[j].upper
                ))
                .at_pair(i, j));
            }
        }
        Ok(HistoricalDataset { samples, bounds })
    }

    pub fn bidders(&self) -> usize {
        self.samples.bidders()
    }

    pub fn items(&self) -> usize {
        self.samples.items()
    }

    pub fn bids(&self, bidder: usize, item: usize) -> &[f64] {
        self.samples.get(bidder, item)
    }

    pub fn bounds(&self, item: usize) -> ItemBounds {
        self.bounds[item]
    }

    pub fn all_bounds(&self) -> &[ItemBounds] {
        &self.bounds
    }

    pub fn samples(&self) -> &Grid<Vec<f64>> {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationParams {
    /// Significance level; intervals have nominal coverage `1 - alpha`.
    pub alpha: f64,
    /// Number of accepted draws per pair.
    pub sampling_count: usize,
}

impl Default for EstimationParams {
    fn default() -> Self {
        EstimationParams {
            alpha: 0.01,
            sampling_count: 1000,
        }
    }
}

/// Confidence intervals for every (bidder, item) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    pub intervals: Grid<Interval>,
    pub alpha: f64,
    pub sampling_count: usize,
}

impl IntervalMatrix {
    pub fn bidders(&self) -> usize {
        self.intervals.bidders()
    }

    pub fn items(&self) -> usize {
        self.intervals.items()
    }

    pub fn get(&self, bidder: usize, item: usize) -> Interval {
        *self.intervals.get(bidder, item)
    }
}

/// KDE interval for a single pair, drawing from `rng`.
pub fn estimate_interval<R: rand::Rng + ?Sized>(
    bids: &[f64],
    bounds: ItemBounds,
    params: EstimationParams,
    rng: &mut R,
) -> Result<Interval> {
    let density = DensityEstimate::fit(bids, bounds)?;
    let draws = density.sample_truncated(params.sampling_count, rng)?;
    let ci = confidence_interval(&draws, params.alpha)?;
    Ok(Interval::new(
        ci.lower.clamp(bounds.lower, bounds.upper),
        ci.upper.clamp(bounds.lower, bounds.upper),
    ))
}

/// Runs the estimate-sample-quantile pipeline for every pair. Pair `(i, j)`
/// draws from its own stream keyed by `(seed, i, j)`, so the result is
/// independent of scheduling.
pub fn estimate_all_intervals(data: &HistoricalDataset, params: EstimationParams, seed: u64) -> Result<IntervalMatrix> {
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        return Err(AuctionError::invalid(format!(
            "alpha must lie in (0, 1), got {}",
            params.alpha
        )));
    }
    if params.sampling_count < 2 {
        return Err(AuctionError::invalid("sampling count must be at least 2"));
    }
    let (m, n) = (data.bidders(), data.items());
    let cells = (0..m * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let mut rng = stream(seed, Purpose::IntervalSampling, i, j);
            estimate_interval(data.bids(i, j), data.bounds(j), params, &mut rng).map_err(|e| e.at_pair(i, j))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntervalMatrix {
        intervals: Grid::from_vec(m, n, cells),
        alpha: params.alpha,
        sampling_count: params.sampling_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(rows: Vec<Vec<Vec<f64>>>, bounds: Vec<(f64, f64)>) -> Result<HistoricalDataset> {
        let m = rows.len();
        let n = bounds.len();
        let cells = rows.into_iter().flatten().collect();
        let bounds = bounds
            .into_iter()
            .map(|(a, b)| ItemBounds::new(a, b).unwrap())
            .collect();
        HistoricalDataset::new(Grid::from_vec(m, n, cells), bounds)
    }

    #[test]
    fn dataset_validation() {
        assert!(dataset(vec![vec![vec![1.0]]], vec![(0.0, 2.0)]).is_err());
        assert!(dataset(vec![vec![vec![1.0]], vec![vec![]]], vec![(0.0, 2.0)]).is_err());
        let err = dataset(vec![vec![vec![1.0]], vec![vec![3.0]]], vec![(0.0, 2.0)]).unwrap_err();
        assert!(matches!(err, AuctionError::AtPair { bidder: 1, item: 0, .. }));
        assert!(ItemBounds::new(2.0, 2.0).is_err());
    }

    #[test]
    fn identical_histories_give_identical_rows() {
        let bids = vec![3.0, 3.4, 4.1, 5.0, 5.5, 6.2];
        let data = dataset(vec![vec![bids.clone()], vec![bids]], vec![(0.0, 10.0)]).unwrap();
        let params = EstimationParams::default();
        let mut r1 = stream(9, Purpose::IntervalSampling, 0, 0);
        let mut r2 = stream(9, Purpose::IntervalSampling, 0, 0);
        let a = estimate_interval(data.bids(0, 0), data.bounds(0), params, &mut r1).unwrap();
        let b = estimate_interval(data.bids(1, 0), data.bounds(0), params, &mut r2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_is_deterministic_and_inside_bounds() {
        let data = dataset(
            vec![
                vec![vec![1.0, 2.0, 2.5], vec![14.0, 15.0, 19.5]],
                vec![vec![7.0, 8.0, 9.9], vec![10.0, 10.0, 10.0]],
            ],
            vec![(0.0, 10.0), (10.0, 20.0)],
        )
        .unwrap();
        let params = EstimationParams::default();
        let a = estimate_all_intervals(&data, params, 5).unwrap();
        let b = estimate_all_intervals(&data, params, 5).unwrap();
        assert_eq!(a, b);
        for (_, j, iv) in a.intervals.iter() {
            let bounds = data.bounds(j);
            assert!(bounds.lower <= iv.lower && iv.lower <= iv.upper && iv.upper <= bounds.upper);
        }
    }
}
