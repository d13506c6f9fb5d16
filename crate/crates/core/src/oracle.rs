//! Exact maximum zero-sum partition for small instances, and subset-sum
//! counting.
//!
//! The maximum number of zero-sum blocks equals the maximum, over all orderings
//! of the entities, of the number of zero prefix sums. Over subsets `S` of the
//! nonzero entities,
//!
//! ```text
//! best(S) = [sum(S) == 0] + max_{e in S} best(S \ {e})
//! ```
//!
//! where `e` ranges over the candidates for the last element of an ordering of
//! `S`. This is `O(2^m * m)` for `m` nonzero entities. Zero entities are forced
//! singleton blocks and are stripped beforehand.

use crate::debt::{DebtVector, Partition};
use crate::error::{Error, Result};

/// Hard cap on nonzero entries accepted by [`exact_max_partition`].
pub const ORACLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub max_blocks: usize,
    pub witness: Partition,
}

pub fn exact_max_partition(d: &DebtVector) -> Result<OracleResult> {
    let (zeros, nonzero): (Vec<usize>, Vec<usize>) = (0..d.len()).partition(|&i| d[i] == 0);
    let m = nonzero.len();
    if m > ORACLE_LIMIT {
        return Err(Error::InstanceTooLarge { nonzero: m, limit: ORACLE_LIMIT });
    }

    let full = (1usize << m) - 1;
    let mut sums = vec![0i64; full + 1];
    let mut best = vec![0u8; full + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + d[nonzero[low]];
        let mut top = 0u8;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            top = top.max(best[mask ^ bit]);
            rest ^= bit;
        }
        best[mask] = top + u8::from(sums[mask] == 0);
    }

    // Walk back along an optimal ordering, last element first.
    let mut order = Vec::with_capacity(m);
    let mut mask = full;
    while mask != 0 {
        let gain = u8::from(sums[mask] == 0);
        let mut rest = mask;
        loop {
            let bit = rest & rest.wrapping_neg();
            if best[mask ^ bit] + gain == best[mask] {
                order.push(nonzero[bit.trailing_zeros() as usize]);
                mask ^= bit;
                break;
            }
            rest ^= bit;
        }
    }
    order.reverse();

    let mut blocks: Vec<Vec<usize>> = zeros.into_iter().map(|z| vec![z]).collect();
    let mut current = Vec::new();
    let mut running = 0i64;
    for e in order {
        running += d[e];
        current.push(e);
        if running == 0 {
            blocks.push(std::mem::take(&mut current));
        }
    }
    debug_assert!(current.is_empty());

    let max_blocks = blocks.len();
    debug_assert_eq!(max_blocks, d.len() - m + usize::from(best[full]));
    Ok(OracleResult { max_blocks, witness: Partition::from_blocks_unchecked(blocks) })
}

/// Number of subsets of `values` (all positive) summing to `target`, counted
/// by the pseudo-polynomial `(element, sum)` recurrence. Counts saturate at
/// `u64::MAX`; callers that only test uniqueness compare against 1.
pub fn count_subset_sums(values: &[u64], target: u64) -> u64 {
    debug_assert!(values.iter().all(|&v| v > 0));
    let total: u64 = values.iter().fold(0u64, |acc, &v| acc.saturating_add(v));
    if target > total {
        return 0;
    }
    // Subsets summing to `target` are the complements of those summing to
    // `total - target`; count the cheaper side.
    let target = target.min(total - target) as usize;
    let mut ways = vec![0u64; target + 1];
    ways[0] = 1;
    for &v in values {
        let v = v as usize;
        if v > target {
            continue;
        }
        for s in (v..=target).rev() {
            ways[s] = ways[s].saturating_add(ways[s - v]);
        }
    }
    ways[target]
}
