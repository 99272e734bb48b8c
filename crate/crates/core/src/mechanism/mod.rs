//! Lower-confidence-bound VCG mechanism.
//!
//! Surviving pairs whose interval is no longer than `d` are priced at their
//! lower confidence bound without contacting the bidder; longer intervals are
//! resolved by a truthful query. Items are then sold separately by second price.

mod tuning;
mod vcg;

use std::fmt::Display;

use serde::Serialize;

use crate::error::{AuctionError, Result};
use crate::estimation::IntervalMatrix;
use crate::grid::Grid;
use crate::winnowing::WinnowResult;

pub use tuning::{compute_n_star, initial_threshold, items_at_risk, sorted_lengths, tune_threshold, Threshold};
pub use vcg::{allocate_vcg, winner_utilities, Allocation};

/// Where an estimated type came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Type I: the bidder was queried and reported truthfully.
    Queried,
    /// Type II: the interval's lower bound stands in for the type.
    LowerBound,
    /// Removed by winnowing; valued at zero.
    Neglected,
}

/// Estimated type matrix `t̂` with per-entry provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedTypes {
    pub values: Grid<f64>,
    pub provenance: Grid<Provenance>,
    pub threshold: f64,
}

impl EstimatedTypes {
    fn count(&self, kind: Provenance) -> usize {
        self.provenance.cells().iter().filter(|&&p| p == kind).count()
    }

    /// Number of lower-bound (type II) entries, `n`.
    pub fn lower_bound_count(&self) -> usize {
        self.count(Provenance::LowerBound)
    }

    pub fn queries_made(&self) -> usize {
        self.count(Provenance::Queried)
    }

    pub fn neglected_count(&self) -> usize {
        self.count(Provenance::Neglected)
    }
}

/// Fills in `t̂` at threshold `d`. `intervals` must have neglected pairs
/// zeroed. `oracle(i, j)` is called at most once per pair, and only for
/// surviving pairs whose interval is longer than `d`.
pub fn classify_and_estimate<F, E>(
    intervals: &IntervalMatrix,
    winnow: &WinnowResult,
    d: f64,
    mut oracle: F,
) -> Result<EstimatedTypes>
where
    F: FnMut(usize, usize) -> std::result::Result<f64, E>,
    E: Display,
{
    if d.is_nan() || d < 0.0 {
        return Err(AuctionError::invalid(format!("threshold must be nonnegative, got {d}")));
    }
    let (m, n) = (intervals.bidders(), intervals.items());
    let mut values = Vec::with_capacity(m * n);
    let mut provenance = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let iv = intervals.get(i, j);
            let (value, kind) = if !winnow.is_kept(i, j) {
                (0.0, Provenance::Neglected)
            } else if iv.length() <= d {
                (iv.lower, Provenance::LowerBound)
            } else {
                let v = oracle(i, j).map_err(|e| AuctionError::Oracle {
                    bidder: i,
                    item: j,
                    message: e.to_string(),
                })?;
                (v, Provenance::Queried)
            };
            values.push(value);
            provenance.push(kind);
        }
    }
    Ok(EstimatedTypes {
        values: Grid::from_vec(m, n, values),
        provenance: Grid::from_vec(m, n, provenance),
        threshold: d,
    })
}

/// Regret of the estimated-type revenue against full-information VCG.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    /// Revenue on true types minus revenue on estimates.
    pub regret: f64,
    /// `k d`.
    pub theoretical: f64,
    /// `Σ_{j∈K} d_j` with `d_j` the longest lower-bound interval of item `j`.
    pub refined: f64,
    pub at_risk_items: Vec<usize>,
}

impl RegretReport {
    pub fn k(&self) -> usize {
        self.at_risk_items.len()
    }
}

pub fn compute_regret(
    true_types: &Grid<f64>,
    estimates: &EstimatedTypes,
    intervals: &IntervalMatrix,
) -> Result<RegretReport> {
    let truth = allocate_vcg(true_types)?;
    let est = allocate_vcg(&estimates.values)?;
    let mut at_risk_items = Vec::new();
    let mut refined = 0.0;
    for j in 0..intervals.items() {
        let d_j = (0..intervals.bidders())
            .filter(|&i| *estimates.provenance.get(i, j) == Provenance::LowerBound)
            .map(|i| intervals.get(i, j).length())
            .filter(|&len| len > 0.0)
            .fold(None, |acc: Option<f64>, len| Some(acc.map_or(len, |a| a.max(len))));
        if let Some(d_j) = d_j {
            at_risk_items.push(j);
            refined += d_j;
        }
    }
    Ok(RegretReport {
        regret: truth.revenue - est.revenue,
        theoretical: at_risk_items.len() as f64 * estimates.threshold,
        refined,
        at_risk_items,
    })
}

/// Everything one auction produced, including the benchmark comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuctionOutcome {
    pub winners: Vec<usize>,
    pub payments: Vec<f64>,
    pub revenue: f64,
    pub threshold: f64,
    pub regret: f64,
    pub theoretical_regret: f64,
    pub refined_regret: f64,
    pub at_risk_items: Vec<usize>,
    pub k: usize,
    pub queries_made: usize,
    pub lower_bound_count: usize,
    pub neglected_count: usize,
}

impl AuctionOutcome {
    /// Sells at the estimates and measures regret against `true_types`.
    pub fn evaluate(true_types: &Grid<f64>, estimates: &EstimatedTypes, intervals: &IntervalMatrix) -> Result<Self> {
        let allocation = allocate_vcg(&estimates.values)?;
        let report = compute_regret(true_types, estimates, intervals)?;
        Ok(AuctionOutcome {
            winners: allocation.winners,
            payments: allocation.payments,
            revenue: allocation.revenue,
            threshold: estimates.threshold,
            regret: report.regret,
            theoretical_regret: report.theoretical,
            refined_regret: report.refined,
            k: report.at_risk_items.len(),
            at_risk_items: report.at_risk_items,
            queries_made: estimates.queries_made(),
            lower_bound_count: estimates.lower_bound_count(),
            neglected_count: estimates.neglected_count(),
        })
    }
}

/// Confidence and loss settings of the mechanism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanismParams {
    pub alpha: f64,
    /// Target confidence rate `η` for `(1 - alpha/2)^n`.
    pub eta: f64,
    /// Revenue loss `q` the seller accepts.
    pub accepted_loss: f64,
}

/// A mechanism run with the threshold chosen by [`tune_threshold`].
#[derive(Debug, Clone, PartialEq)]
pub struct TunedAuction {
    pub n_star: usize,
    pub threshold: Threshold,
    /// Intervals with neglected pairs zeroed.
    pub intervals: IntervalMatrix,
    pub estimates: EstimatedTypes,
    pub allocation: Allocation,
}

/// Zeroes neglected pairs, tunes `d`, queries what must be queried and sells.
pub fn run_mechanism<F, E>(
    intervals: &IntervalMatrix,
    winnow: &WinnowResult,
    params: MechanismParams,
    oracle: F,
) -> Result<TunedAuction>
where
    F: FnMut(usize, usize) -> std::result::Result<f64, E>,
    E: Display,
{
    let zeroed = winnow.zero_neglected(intervals);
    let m_star = winnow.neglected_count();
    let pairs = intervals.bidders() * intervals.items();
    let n_star = compute_n_star(params.alpha, params.eta, pairs - m_star)?;
    let threshold = tune_threshold(&zeroed, n_star, m_star, params.accepted_loss)?;
    let estimates = classify_and_estimate(&zeroed, winnow, threshold.d, oracle)?;
    let allocation = allocate_vcg(&estimates.values)?;
    Ok(TunedAuction {
        n_star,
        threshold,
        intervals: zeroed,
        estimates,
        allocation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::Interval;
    use crate::winnowing::winnow;
    use std::convert::Infallible;

    fn matrix(m: usize, n: usize, ivs: Vec<(f64, f64)>) -> IntervalMatrix {
        IntervalMatrix {
            intervals: Grid::from_vec(m, n, ivs.into_iter().map(|(l, u)| Interval::new(l, u)).collect()),
            alpha: 0.01,
            sampling_count: 1000,
        }
    }

    fn oracle(truth: &Grid<f64>) -> impl FnMut(usize, usize) -> std::result::Result<f64, Infallible> + '_ {
        move |i, j| Ok(*truth.get(i, j))
    }

    #[test]
    fn classification_cases() {
        // bidder 0: short interval; bidder 1: long interval; bidder 2: neglected
        let mat = matrix(3, 1, vec![(2.0, 2.3), (2.0, 3.0), (0.0, 1.0)]);
        let w = winnow(&mat).unwrap();
        assert!(!w.is_kept(2, 0));
        let zeroed = w.zero_neglected(&mat);
        let truth = Grid::from_vec(3, 1, vec![2.1, 2.7, 0.9]);
        let mut calls = Vec::new();
        let est = classify_and_estimate(&zeroed, &w, 0.5, |i, j| {
            calls.push((i, j));
            Ok::<_, Infallible>(*truth.get(i, j))
        })
        .unwrap();
        assert_eq!(calls, vec![(1, 0)]);
        assert_eq!(*est.values.get(0, 0), 2.0);
        assert_eq!(*est.provenance.get(0, 0), Provenance::LowerBound);
        assert_eq!(*est.values.get(1, 0), 2.7);
        assert_eq!(*est.provenance.get(1, 0), Provenance::Queried);
        assert_eq!(*est.values.get(2, 0), 0.0);
        assert_eq!(*est.provenance.get(2, 0), Provenance::Neglected);
    }

    #[test]
    fn zero_length_survivor_is_lower_bound_at_d_zero() {
        let mat = matrix(2, 1, vec![(4.0, 4.0), (3.0, 5.0)]);
        let w = winnow(&mat).unwrap();
        let truth = Grid::from_vec(2, 1, vec![4.2, 4.5]);
        let est = classify_and_estimate(&w.zero_neglected(&mat), &w, 0.0, oracle(&truth)).unwrap();
        assert_eq!(*est.provenance.get(0, 0), Provenance::LowerBound);
        assert_eq!(est.queries_made(), 1);
        let report = compute_regret(&truth, &est, &w.zero_neglected(&mat)).unwrap();
        assert_eq!(report.k(), 0);
        assert_eq!(report.theoretical, 0.0);
    }

    #[test]
    fn oracle_failure_carries_pair() {
        let mat = matrix(2, 1, vec![(0.0, 5.0), (1.0, 5.0)]);
        let w = winnow(&mat).unwrap();
        let err = classify_and_estimate(
            &mat,
            &w,
            0.0,
            |i, _| {
                if i == 1 {
                    Err("bidder offline")
                } else {
                    Ok(1.0)
                }
            },
        )
        .unwrap_err();
        assert_eq!(
            err,
            AuctionError::Oracle {
                bidder: 1,
                item: 0,
                message: "bidder offline".into()
            }
        );
    }

    #[test]
    fn exact_estimates_have_no_regret() {
        let mat = matrix(
            3,
            2,
            vec![(0.0, 5.0), (0.0, 5.0), (1.0, 6.0), (0.0, 9.0), (2.0, 4.0), (1.0, 7.0)],
        );
        let w = WinnowResult::keep_all(&mat).unwrap();
        let truth = Grid::from_vec(3, 2, vec![2.0, 3.0, 4.0, 8.0, 3.5, 6.0]);
        let est = classify_and_estimate(&mat, &w, 0.0, oracle(&truth)).unwrap();
        let out = AuctionOutcome::evaluate(&truth, &est, &mat).unwrap();
        assert_eq!(out.regret, 0.0);
        assert_eq!(out.k, 0);
        assert_eq!(out.theoretical_regret, 0.0);
        assert_eq!(out.refined_regret, 0.0);
        assert_eq!(out.queries_made, 6);
    }

    #[test]
    fn refined_never_exceeds_theoretical() {
        let mat = matrix(
            3,
            2,
            vec![(0.0, 0.5), (2.0, 3.0), (0.2, 0.4), (2.5, 2.6), (0.1, 2.0), (1.0, 2.0)],
        );
        let w = WinnowResult::keep_all(&mat).unwrap();
        let truth = Grid::from_vec(3, 2, vec![0.3, 2.5, 0.3, 2.55, 1.0, 1.5]);
        let est = classify_and_estimate(&mat, &w, 1.0, oracle(&truth)).unwrap();
        let report = compute_regret(&truth, &est, &mat).unwrap();
        assert_eq!(report.at_risk_items, vec![0, 1]);
        assert_eq!(report.theoretical, 2.0);
        // d_0 = max(0.5, 0.2) and d_1 = max(1.0, 0.1, 1.0)
        assert!((report.refined - 1.5).abs() < 1e-12);
        assert!(report.refined <= report.theoretical);
    }

    #[test]
    fn accounting_identity() {
        let mat = matrix(
            3,
            2,
            vec![(0.0, 0.5), (2.0, 3.0), (0.2, 0.4), (2.5, 2.6), (8.0, 9.0), (1.0, 2.0)],
        );
        let w = winnow(&mat).unwrap();
        let truth = Grid::from_vec(3, 2, vec![0.3, 2.5, 0.3, 2.55, 8.5, 1.5]);
        let params = MechanismParams {
            alpha: 0.01,
            eta: 0.9,
            accepted_loss: 0.5,
        };
        let run = run_mechanism(&mat, &w, params, oracle(&truth)).unwrap();
        let e = &run.estimates;
        assert_eq!(e.queries_made() + e.lower_bound_count() + e.neglected_count(), 6);
        assert_eq!(e.neglected_count(), w.neglected_count());
        assert!(run.threshold.k() as f64 * run.threshold.d <= 0.5);
    }
}
