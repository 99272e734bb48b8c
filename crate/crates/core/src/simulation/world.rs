use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{AuctionError, Result};
use crate::estimation::{HistoricalDataset, ItemBounds};
use crate::grid::Grid;
use crate::rng::{stream, Purpose};

use super::ScenarioConfig;

/// Proposal cap per truncated-Gaussian draw.
pub const MAX_DRAW_PROPOSALS: u32 = 1_000_000;

/// Gaussian restricted and renormalized to an item's value range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussian {
    pub mean: f64,
    pub sd: f64,
    pub bounds: ItemBounds,
}

impl TruncatedGaussian {
    pub fn new(mean: f64, sd: f64, bounds: ItemBounds) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(AuctionError::invalid(format!("bad Gaussian parameters ({mean}, {sd})")));
        }
        Ok(TruncatedGaussian { mean, sd, bounds })
    }

    /// One draw by rejection from the untruncated Gaussian.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let normal = Normal::new(self.mean, self.sd).expect("validated parameters");
        for _ in 0..MAX_DRAW_PROPOSALS {
            let x = normal.sample(rng);
            if self.bounds.contains(x) {
                return Ok(x);
            }
        }
        Err(AuctionError::Generation(format!(
            "no draw of N({}, {}^2) landed in [{}, {}] after {} proposals",
            self.mean, self.sd, self.bounds.lower, self.bounds.upper, MAX_DRAW_PROPOSALS
        )))
    }
}

/// Value range of item `j` (0-based): `[10 j, 10 (j + 1)]`.
pub fn item_bounds(item: usize) -> ItemBounds {
    ItemBounds {
        lower: 10.0 * item as f64,
        upper: 10.0 * (item + 1) as f64,
    }
}

/// Type distribution of one pair: mean uniform over the item range,
/// variance `10^x` with `x` uniform on `[-1, 1]`.
pub fn draw_distribution<R: Rng + ?Sized>(item: usize, rng: &mut R) -> TruncatedGaussian {
    let bounds = item_bounds(item);
    let mean = rng.random_range(bounds.lower..=bounds.upper);
    let exponent: f64 = rng.random_range(-1.0..=1.0);
    let sd = 10f64.powf(exponent).sqrt();
    TruncatedGaussian { mean, sd, bounds }
}

/// A synthetic market: true type distributions, one realized true type per
/// pair, and the historical bids drawn from the same distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueWorld {
    pub seed: u64,
    pub distributions: Grid<TruncatedGaussian>,
    pub true_types: Grid<f64>,
    pub history: HistoricalDataset,
}

impl TrueWorld {
    pub fn bidders(&self) -> usize {
        self.true_types.bidders()
    }

    pub fn items(&self) -> usize {
        self.true_types.items()
    }
}

/// Generates the world for `config.seed`. Each pair's distribution, true type
/// and history come from separate streams.
pub fn generate_world(config: &ScenarioConfig) -> Result<TrueWorld> {
    config.validate()?;
    let (m, n, seed) = (config.bidders, config.items, config.seed);
    let distributions = Grid::from_fn(m, n, |i, j| {
        draw_distribution(j, &mut stream(seed, Purpose::Distribution, i, j))
    });
    let mut true_types = Vec::with_capacity(m * n);
    let mut histories = Vec::with_capacity(m * n);
    for (i, j, dist) in distributions.iter() {
        let t = dist
            .sample(&mut stream(seed, Purpose::TrueType, i, j))
            .map_err(|e| e.at_pair(i, j))?;
        true_types.push(t);
        let mut rng = stream(seed, Purpose::History, i, j);
        let bids = (0..config.history_size)
            .map(|_| dist.sample(&mut rng))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.at_pair(i, j))?;
        histories.push(bids);
    }
    let history = HistoricalDataset::new(Grid::from_vec(m, n, histories), (0..n).map(item_bounds).collect())?;
    Ok(TrueWorld {
        seed,
        distributions,
        true_types: Grid::from_vec(m, n, true_types),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrowest_variance_concentrates() {
        // sd = sqrt(10^-1) ~ 0.316: mu +- 1 is about 3.16 sd, tail mass ~0.16%.
        let dist = TruncatedGaussian::new(5.0, 0.1f64.sqrt(), item_bounds(0)).unwrap();
        let mut rng = stream(1, Purpose::History, 0, 0);
        let draws: Vec<f64> = (0..20_000).map(|_| dist.sample(&mut rng).unwrap()).collect();
        let inside = draws.iter().filter(|&&x| (x - 5.0).abs() <= 1.0).count();
        assert!(inside as f64 / draws.len() as f64 >= 0.99);
    }

    #[test]
    fn impossible_truncation_errors() {
        let dist = TruncatedGaussian::new(1e6, 0.1, item_bounds(0)).unwrap();
        assert!(matches!(
            dist.sample(&mut stream(1, Purpose::History, 0, 0)),
            Err(AuctionError::Generation(_))
        ));
    }

    #[test]
    fn distribution_parameters_in_range() {
        let mut rng = stream(4, Purpose::Distribution, 0, 0);
        for j in 0..5 {
            let d = draw_distribution(j, &mut rng);
            assert!(d.bounds.contains(d.mean));
            assert!(d.sd >= 0.1f64.sqrt() - 1e-12 && d.sd <= 10f64.sqrt() + 1e-12);
        }
    }
}
