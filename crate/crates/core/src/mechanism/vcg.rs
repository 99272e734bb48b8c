use serde::Serialize;

use crate::error::{AuctionError, Result};
use crate::grid::Grid;

/// Per-item second-price allocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allocation {
    pub winners: Vec<usize>,
    pub payments: Vec<f64>,
    pub revenue: f64,
}

/// Sells every item separately: the highest bid wins (lowest index on ties)
/// and pays the highest bid among the other bidders.
pub fn allocate_vcg(bids: &Grid<f64>) -> Result<Allocation> {
    if bids.bidders() < 2 {
        return Err(AuctionError::invalid("a second price needs at least two bidders"));
    }
    let mut winners = Vec::with_capacity(bids.items());
    let mut payments = Vec::with_capacity(bids.items());
    for j in 0..bids.items() {
        let mut winner = 0;
        let mut best = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for (i, &b) in bids.column(j).enumerate() {
            if b > best {
                second = best;
                best = b;
                winner = i;
            } else if b > second {
                second = b;
            }
        }
        winners.push(winner);
        payments.push(second);
    }
    let revenue = payments.iter().sum();
    Ok(Allocation {
        winners,
        payments,
        revenue,
    })
}

/// Realized utility `t[winner][j] - payment[j]` of each item's winner.
pub fn winner_utilities(true_types: &Grid<f64>, allocation: &Allocation) -> Vec<f64> {
    allocation
        .winners
        .iter()
        .zip(&allocation.payments)
        .enumerate()
        .map(|(j, (&w, &p))| true_types.get(w, j) - p)
        .collect()
}
