//! Per-item pruning of bidders who cannot plausibly win.
//!
//! For each item the bidder with the highest upper bound is the leader; only
//! bidders whose upper bound exceeds the leader's lower bound stay in the
//! running. Everyone else is neglected and never queried.

use crate::error::{AuctionError, Result};
use crate::estimation::{Interval, IntervalMatrix};
use crate::grid::Grid;

/// Index of the interval with the largest upper bound; ties go to the lowest index.
pub fn find_leader(intervals: &[Interval]) -> Result<usize> {
    let mut iter = intervals.iter().enumerate();
    let (mut best, first) = iter
        .next()
        .ok_or_else(|| AuctionError::invalid("cannot pick a leader among zero bidders"))?;
    let mut top = first.upper;
    for (i, iv) in iter {
        if iv.upper > top {
            top = iv.upper;
            best = i;
        }
    }
    Ok(best)
}

/// Whether `[a.lower, a.upper)` and `(b.lower, b.upper]` intersect.
pub fn is_linked(a: Interval, b: Interval) -> bool {
    let lo = a.lower.max(b.lower);
    let hi = a.upper.min(b.upper);
    if lo < hi {
        return true;
    }
    // A single shared point survives only if it is closed on both sides:
    // it must be a's left end (strictly right of b.lower) and b's right end
    // (strictly left of a.upper).
    lo == hi && lo == a.lower && a.lower > b.lower && hi == b.upper && b.upper < a.upper
}

/// Outcome of winnowing: which bidders remain per item.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnowResult {
    kept: Grid<bool>,
    leaders: Vec<usize>,
    neglected: usize,
}

impl WinnowResult {
    /// Keeps every bidder on every item (no winnowing).
    pub fn keep_all(intervals: &IntervalMatrix) -> Result<Self> {
        let (m, n) = (intervals.bidders(), intervals.items());
        let leaders = (0..n)
            .map(|j| find_leader(&intervals.intervals.column(j).copied().collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Ok(WinnowResult {
            kept: Grid::from_fn(m, n, |_, _| true),
            leaders,
            neglected: 0,
        })
    }

    pub fn is_kept(&self, bidder: usize, item: usize) -> bool {
        *self.kept.get(bidder, item)
    }

    /// Retained bidders `B_j` for `item`, ascending.
    pub fn kept_bidders(&self, item: usize) -> Vec<usize> {
        self.kept
            .column(item)
            .enumerate()
            .filter_map(|(i, &k)| k.then_some(i))
            .collect()
    }

    pub fn leader(&self, item: usize) -> usize {
        self.leaders[item]
    }

    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    /// Number of neglected (bidder, item) pairs, `m*`.
    pub fn neglected_count(&self) -> usize {
        self.neglected
    }

    pub fn mask(&self) -> &Grid<bool> {
        &self.kept
    }

    /// Copy of `intervals` with every neglected pair set to `[0, 0]`.
    pub fn zero_neglected(&self, intervals: &IntervalMatrix) -> IntervalMatrix {
        IntervalMatrix {
            intervals: intervals
                .intervals
                .map(|i, j, iv| if self.is_kept(i, j) { *iv } else { Interval::default() }),
            alpha: intervals.alpha,
            sampling_count: intervals.sampling_count,
        }
    }
}

/// Keeps, per item, the leader and every bidder whose upper bound strictly
/// exceeds the leader's lower bound.
pub fn winnow(intervals: &IntervalMatrix) -> Result<WinnowResult> {
    let (m, n) = (intervals.bidders(), intervals.items());
    let mut kept = Grid::from_fn(m, n, |_, _| false);
    let mut leaders = Vec::with_capacity(n);
    let mut retained = 0;
    for j in 0..n {
        let column: Vec<Interval> = intervals.intervals.column(j).copied().collect();
        let leader = find_leader(&column)?;
        let floor = column[leader].lower;
        for (i, iv) in column.iter().enumerate() {
            if i == leader || iv.upper > floor {
                *kept.get_mut(i, j) = true;
                retained += 1;
            }
        }
        leaders.push(leader);
    }
    Ok(WinnowResult {
        kept,
        leaders,
        neglected: m * n - retained,
    })
}
