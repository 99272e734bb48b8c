//! Choice of the length threshold `d` separating queried from lower-bound
//! estimates.

use serde::Serialize;

use crate::error::{AuctionError, Result};
use crate::estimation::IntervalMatrix;

/// Largest number of lower-bound estimates `n` with `(1 - alpha/2)^n >= eta`,
/// capped at `cap` (the number of non-neglected pairs).
pub fn compute_n_star(alpha: f64, eta: f64, cap: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(AuctionError::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(AuctionError::invalid(format!("eta must lie in (0, 1], got {eta}")));
    }
    let bound = (eta.ln() / (1.0 - alpha / 2.0).ln()).floor();
    // eta = 1 gives -0.0 / x; floor of a tiny negative stays below one anyway
    let bound = if bound.is_finite() && bound > 0.0 {
        bound as usize
    } else {
        0
    };
    Ok(bound.min(cap))
}

/// Interval lengths of every pair, ascending. Neglected pairs were zeroed and
/// contribute leading zeros.
pub fn sorted_lengths(intervals: &IntervalMatrix) -> Vec<f64> {
    let mut lengths: Vec<f64> = intervals.intervals.cells().iter().map(|iv| iv.length()).collect();
    lengths.sort_by(f64::total_cmp);
    lengths
}

/// Items `K` holding at least one interval with `0 < length <= d`.
pub fn items_at_risk(intervals: &IntervalMatrix, d: f64) -> Vec<usize> {
    (0..intervals.items())
        .filter(|&j| {
            intervals.intervals.column(j).any(|iv| {
                let len = iv.length();
                len > 0.0 && len <= d
            })
        })
        .collect()
}

/// Result of the threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub d: f64,
    pub at_risk_items: Vec<usize>,
    /// Number of loop iterations taken.
    pub steps: usize,
}

impl Threshold {
    pub fn k(&self) -> usize {
        self.at_risk_items.len()
    }
}

/// Walks the sorted lengths starting at position `n_star + m_star`, stepping
/// down while `k d > q` and up while `k d <= q`, until the walk turns around.
/// The threshold is the lower of the two values it oscillates between. The
/// position is clamped to `[m_star, mN]`; hitting either end stops the walk.
///
/// `intervals` must already have neglected pairs zeroed.
pub fn tune_threshold(
    intervals: &IntervalMatrix,
    n_star: usize,
    m_star: usize,
    accepted_loss: f64,
) -> Result<Threshold> {
    if accepted_loss.is_nan() || accepted_loss < 0.0 {
        return Err(AuctionError::invalid(format!(
            "accepted loss must be nonnegative, got {accepted_loss}"
        )));
    }
    let lengths = sorted_lengths(intervals);
    let total = lengths.len();
    if m_star > total {
        return Err(AuctionError::invalid("more neglected pairs than pairs"));
    }
    // 1-based position into the sorted lengths; position 0 means d = 0.
    let length_at = |pos: usize| if pos == 0 { 0.0 } else { lengths[pos - 1] };
    let cost = |d: f64| items_at_risk(intervals, d).len() as f64 * d;

    #[derive(PartialEq)]
    enum Step {
        Up,
        Down,
    }

    let mut pos = (n_star + m_star).clamp(m_star, total);
    let mut last: Option<Step> = None;
    let mut steps = 0;
    let d = loop {
        steps += 1;
        let d = length_at(pos);
        if cost(d) > accepted_loss {
            if last == Some(Step::Up) {
                break length_at(pos - 1);
            }
            if pos == m_star {
                break d;
            }
            pos -= 1;
            last = Some(Step::Down);
        } else {
            if last == Some(Step::Down) || pos == total {
                break d;
            }
            pos += 1;
            last = Some(Step::Up);
        }
    };
    Ok(Threshold {
        d,
        at_risk_items: items_at_risk(intervals, d),
        steps,
    })
}

/// Threshold before any adjustment: the length at position `n_star + m_star`.
pub fn initial_threshold(intervals: &IntervalMatrix, n_star: usize, m_star: usize) -> f64 {
    let lengths = sorted_lengths(intervals);
    let pos = (n_star + m_star).min(lengths.len());
    if pos == 0 {
        0.0
    } else {
        lengths[pos - 1]
    }
}
