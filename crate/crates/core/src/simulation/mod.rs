//! Synthetic experiment harness.
//!
//! A [`TrueWorld`] is generated per seed; each [`Method`] turns its history
//! into intervals, and the mechanism is evaluated at a range of thresholds
//! `d`, producing one [`SweepRecord`] per threshold.

mod world;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{AuctionError, Result};
use crate::estimation::{estimate_all_intervals, EstimationParams, Interval, IntervalMatrix};
use crate::mechanism::{classify_and_estimate, AuctionOutcome, EstimatedTypes};
use crate::winnowing::{winnow, WinnowResult};

pub use world::{draw_distribution, generate_world, item_bounds, TrueWorld, TruncatedGaussian, MAX_DRAW_PROPOSALS};

/// How intervals are built and whether bidders are winnowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    /// KDE intervals, winnowed.
    Method1,
    /// KDE intervals, every bidder kept.
    Method2,
    /// `[min Γ, max Γ]` intervals, winnowed.
    Method3,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Method1, Method::Method2, Method::Method3];

    pub fn number(self) -> u8 {
        match self {
            Method::Method1 => 1,
            Method::Method2 => 2,
            Method::Method3 => 3,
        }
    }

    pub fn uses_kde(self) -> bool {
        !matches!(self, Method::Method3)
    }

    pub fn winnows(self) -> bool {
        !matches!(self, Method::Method2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Method {
    type Err = AuctionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "method1" => Ok(Method::Method1),
            "2" | "method2" => Ok(Method::Method2),
            "3" | "method3" => Ok(Method::Method3),
            other => Err(AuctionError::invalid(format!("unknown method `{other}`"))),
        }
    }
}

/// Thresholds to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum DSweep {
    /// Zero plus every distinct positive interval length of the method.
    Auto,
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub bidders: usize,
    pub items: usize,
    /// Historical bids per pair.
    pub history_size: usize,
    pub alpha: f64,
    pub eta: f64,
    pub sampling_count: usize,
    pub seed: u64,
    pub d_sweep: DSweep,
    pub methods: Vec<Method>,
    /// Accepted revenue loss `q` used when the threshold is tuned.
    pub accepted_loss: f64,
}

impl ScenarioConfig {
    pub const DEFAULT_HISTORY_SIZE: usize = 50;
    pub const DEFAULT_ALPHA: f64 = 0.01;
    pub const DEFAULT_ETA: f64 = 0.9;
    pub const DEFAULT_SAMPLING_COUNT: usize = 1000;

    /// Defaults for everything but the market size and seed.
    pub fn new(bidders: usize, items: usize, seed: u64) -> Self {
        ScenarioConfig {
            bidders,
            items,
            history_size: Self::DEFAULT_HISTORY_SIZE,
            alpha: Self::DEFAULT_ALPHA,
            eta: Self::DEFAULT_ETA,
            sampling_count: Self::DEFAULT_SAMPLING_COUNT,
            seed,
            d_sweep: DSweep::Auto,
            methods: Method::ALL.to_vec(),
            accepted_loss: 0.0,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ScenarioConfig { seed, ..self.clone() }
    }

    pub fn estimation_params(&self) -> EstimationParams {
        EstimationParams {
            alpha: self.alpha,
            sampling_count: self.sampling_count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(AuctionError::InvalidInput(msg));
        if self.bidders < 2 {
            return bad(format!("m must be at least 2, got {}", self.bidders));
        }
        if self.items < 1 {
            return bad("N must be at least 1".into());
        }
        if self.history_size < 1 {
            return bad("history_size must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad(format!("eta must lie in (0, 1], got {}", self.eta));
        }
        if self.sampling_count < 2 {
            return bad("sampling_count must be at least 2".into());
        }
        if !(self.accepted_loss >= 0.0 && self.accepted_loss.is_finite()) {
            return bad(format!("q must be a nonnegative number, got {}", self.accepted_loss));
        }
        if let DSweep::Values(ds) = &self.d_sweep {
            if ds.is_empty() {
                return bad("d_sweep must not be empty".into());
            }
            if let Some(d) = ds.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
                return bad(format!("d_sweep values must be nonnegative, got {d}"));
            }
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        Ok(())
    }
}

/// Metrics of one method on one world at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub d: f64,
    pub revenue: f64,
    pub true_revenue: f64,
    pub regret: f64,
    pub theoretical_regret: f64,
    pub refined_regret: f64,
    /// Lower-bound (type II) estimates.
    pub n: usize,
    pub m_star: usize,
    pub k: usize,
    pub queries: usize,
    pub proportion_without_queries: f64,
    /// `(1 - alpha)^n`.
    pub confidence_rate_paper: f64,
    /// `(1 - alpha/2)^n`.
    pub confidence_rate_theorem: f64,
}

/// `[min Γ_ij, max Γ_ij]` for every pair.
pub fn minmax_intervals(world: &TrueWorld, alpha: f64) -> IntervalMatrix {
    let samples = world.history.samples();
    IntervalMatrix {
        intervals: samples.map(|_, _, bids| {
            let lo = bids.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = bids.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Interval::new(lo, hi)
        }),
        alpha,
        sampling_count: 0,
    }
}

/// KDE intervals for the world, sampled with the world's seed.
pub fn kde_intervals(world: &TrueWorld, config: &ScenarioConfig) -> Result<IntervalMatrix> {
    estimate_all_intervals(&world.history, config.estimation_params(), world.seed)
}

/// One method's intervals after winnowing, ready to evaluate at any `d`.
#[derive(Debug, Clone)]
pub struct PreparedMethod {
    pub method: Method,
    pub winnow: WinnowResult,
    /// Intervals with neglected pairs zeroed.
    pub intervals: IntervalMatrix,
}

impl PreparedMethod {
    /// `intervals` are the raw (unzeroed) intervals appropriate to `method`.
    pub fn new(method: Method, intervals: &IntervalMatrix) -> Result<Self> {
        let winnow = if method.winnows() {
            winnow(intervals)?
        } else {
            WinnowResult::keep_all(intervals)?
        };
        Ok(PreparedMethod {
            method,
            intervals: winnow.zero_neglected(intervals),
            winnow,
        })
    }

    pub fn m_star(&self) -> usize {
        self.winnow.neglected_count()
    }

    /// Zero plus each distinct positive interval length, ascending.
    pub fn auto_thresholds(&self) -> Vec<f64> {
        let mut ds: Vec<f64> = self
            .intervals
            .intervals
            .cells()
            .iter()
            .map(|iv| iv.length())
            .filter(|&l| l > 0.0)
            .collect();
        ds.push(0.0);
        ds.sort_by(f64::total_cmp);
        ds.dedup();
        ds
    }

    pub fn estimates(&self, world: &TrueWorld, d: f64) -> Result<EstimatedTypes> {
        let truth = &world.true_types;
        classify_and_estimate(&self.intervals, &self.winnow, d, |i, j| {
            Ok::<_, std::convert::Infallible>(*truth.get(i, j))
        })
    }

    pub fn outcome(&self, world: &TrueWorld, d: f64) -> Result<AuctionOutcome> {
        let est = self.estimates(world, d)?;
        AuctionOutcome::evaluate(&world.true_types, &est, &self.intervals)
    }

    pub fn evaluate(&self, world: &TrueWorld, d: f64, alpha: f64) -> Result<SweepRecord> {
        let out = self.outcome(world, d)?;
        let pairs = (world.bidders() * world.items()) as f64;
        let n = out.lower_bound_count;
        Ok(SweepRecord {
            d,
            revenue: out.revenue,
            true_revenue: out.revenue + out.regret,
            regret: out.regret,
            theoretical_regret: out.theoretical_regret,
            refined_regret: out.refined_regret,
            n,
            m_star: self.m_star(),
            k: out.k,
            queries: out.queries_made,
            proportion_without_queries: (self.m_star() + n) as f64 / pairs,
            confidence_rate_paper: (1.0 - alpha).powi(n as i32),
            confidence_rate_theorem: (1.0 - alpha / 2.0).powi(n as i32),
        })
    }
}

/// Prepares every configured method on one world, sharing the KDE intervals
/// between methods 1 and 2.
pub fn prepare_methods(world: &TrueWorld, config: &ScenarioConfig) -> Result<Vec<PreparedMethod>> {
    let kde = if config.methods.iter().any(|m| m.uses_kde()) {
        Some(kde_intervals(world, config)?)
    } else {
        None
    };
    config
        .methods
        .iter()
        .map(|&method| {
            let intervals = match method {
                Method::Method3 => minmax_intervals(world, config.alpha),
                _ => kde.clone().expect("computed above"),
            };
            PreparedMethod::new(method, &intervals)
        })
        .collect()
}

/// Runs `method` on `world` at threshold `d`.
pub fn run_method(world: &TrueWorld, config: &ScenarioConfig, method: Method, d: f64) -> Result<SweepRecord> {
    if d.is_nan() || d < 0.0 {
        return Err(AuctionError::invalid(format!("threshold must be nonnegative, got {d}")));
    }
    let intervals = match method {
        Method::Method3 => minmax_intervals(world, config.alpha),
        _ => kde_intervals(world, config)?,
    };
    PreparedMethod::new(method, &intervals)?.evaluate(world, d, config.alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSweep {
    pub method: Method,
    pub records: Vec<SweepRecord>,
}

/// Evaluates every configured method over the configured thresholds, in
/// ascending `d`.
pub fn sweep(world: &TrueWorld, config: &ScenarioConfig) -> Result<Vec<MethodSweep>> {
    config.validate()?;
    prepare_methods(world, config)?
        .into_iter()
        .map(|prepared| {
            let ds = match &config.d_sweep {
                DSweep::Auto => prepared.auto_thresholds(),
                DSweep::Values(v) => {
                    let mut v = v.clone();
                    v.sort_by(f64::total_cmp);
                    v
                }
            };
            let records = ds
                .into_iter()
                .map(|d| prepared.evaluate(world, d, config.alpha))
                .collect::<Result<Vec<_>>>()?;
            Ok(MethodSweep {
                method: prepared.method,
                records,
            })
        })
        .collect()
}
