//! How many ways are there to split `N` items into bundles of at most two?
//!
//! The count is `1 + Σ_{i=1}^{⌊N/2⌋} N! / ((N-2i)! i! 2^i)` (the telephone /
//! involution numbers) and it outgrows `(2N/3)^⌊N/3⌋`, which is why items are
//! sold separately rather than searched over bundles.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{AuctionError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationCount {
    pub items: u32,
    pub exact: BigUint,
    pub lower_bound: BigUint,
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of partitions of `items` labelled items into blocks of size one or two.
pub fn count_allocations_leq2(items: u32) -> Result<BigUint> {
    if items == 0 {
        return Err(AuctionError::invalid("item count must be positive"));
    }
    let n_fact = factorial(items);
    let mut total = BigUint::one();
    for pairs in 1..=items / 2 {
        let denom = factorial(items - 2 * pairs) * factorial(pairs) * (BigUint::one() << pairs);
        total += &n_fact / denom;
    }
    Ok(total)
}

/// `⌊(2N/3)^⌊N/3⌋⌋` in exact arithmetic.
pub fn allocation_lower_bound(items: u32) -> Result<BigUint> {
    if items == 0 {
        return Err(AuctionError::invalid("item count must be positive"));
    }
    let exp = items / 3;
    let num = BigUint::from(2 * items).pow(exp);
    let den = BigUint::from(3u32).pow(exp);
    Ok(num / den)
}

pub fn allocation_count(items: u32) -> Result<AllocationCount> {
    Ok(AllocationCount {
        items,
        exact: count_allocations_leq2(items)?,
        lower_bound: allocation_lower_bound(items)?,
    })
}

/// Rows `N = 1..=max_items`.
pub fn allocation_table(max_items: u32) -> Result<Vec<AllocationCount>> {
    (1..=max_items).map(allocation_count).collect()
}

/// Counts by the recurrence `a(N) = a(N-1) + (N-1) a(N-2)`: item `N` is either
/// alone or paired with one of the other `N - 1` items.
pub fn count_by_recurrence(items: u32) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::one());
    for n in 2..=items {
        let next = &cur + &prev * (n - 1);
        prev = std::mem::replace(&mut cur, next);
    }
    if items == 0 {
        BigUint::one()
    } else {
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates every partition into blocks of size <= 2 explicitly.
    fn enumerate(items: u32) -> u64 {
        fn go(remaining: &mut Vec<u32>) -> u64 {
            let Some(first) = remaining.pop() else {
                return 1;
            };
            // first item alone
            let mut count = go(remaining);
            // first item paired with each other remaining item
            for k in 0..remaining.len() {
                let partner = remaining.remove(k);
                count += go(remaining);
                remaining.insert(k, partner);
            }
            remaining.push(first);
            count
        }
        go(&mut (1..=items).collect())
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_allocations_leq2(1).unwrap(), BigUint::from(1u32));
        assert_eq!(count_allocations_leq2(3).unwrap(), BigUint::from(4u32));
        assert_eq!(count_allocations_leq2(4).unwrap(), BigUint::from(10u32));
        assert!(count_allocations_leq2(0).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(allocation_lower_bound(1).unwrap(), BigUint::from(1u32));
        assert_eq!(allocation_lower_bound(3).unwrap(), BigUint::from(2u32));
        assert_eq!(allocation_lower_bound(12).unwrap(), BigUint::from(4096u32));
        // (10/3)^1 floors to 3
        assert_eq!(allocation_lower_bound(5).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn formula_matches_enumeration() {
        for n in 1..=12 {
            assert_eq!(
                count_allocations_leq2(n).unwrap(),
                BigUint::from(enumerate(n)),
                "N = {n}"
            );
        }
    }

    #[test]
    fn formula_matches_recurrence() {
        for n in 1..=80 {
            assert_eq!(count_allocations_leq2(n).unwrap(), count_by_recurrence(n), "N = {n}");
        }
    }

    #[test]
    fn sixty_items_exceed_u64() {
        let c = count_allocations_leq2(60).unwrap();
        assert!(c > BigUint::from(u64::MAX));
        assert!(c >= allocation_lower_bound(60).unwrap());
    }
}
