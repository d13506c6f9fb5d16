//! Turning net debts into transfers.

use crate::debt::{DebtVector, Partition, TransactionPlan, Transfer};
use crate::error::{Error, Result};

/// True iff executing `plan` reproduces exactly the net debts `d`: for every
/// entity, outgoing minus incoming equals its debt value.
pub fn verify_clearing(d: &DebtVector, plan: &TransactionPlan) -> bool {
    let mut net = vec![0i128; d.len()];
    for t in plan.transfers() {
        if t.from >= d.len() || t.to >= d.len() || t.amount <= 0 || t.from == t.to {
            return false;
        }
        net[t.from] += i128::from(t.amount);
        net[t.to] -= i128::from(t.amount);
    }
    net.iter().zip(d.values()).all(|(&have, &want)| have == i128::from(want))
}

/// Settles the given entities among themselves. Their debts must sum to zero.
///
/// Repeatedly pairs the lowest-index remaining payer with the lowest-index
/// remaining receiver and transfers the smaller of the two magnitudes. Each
/// step zeroes at least one side and the final step zeroes both, so `z`
/// nonzero entities need at most `z - 1` transfers.
fn greedy_over(d: &DebtVector, entities: &[usize], plan: &mut TransactionPlan) {
    let mut payers: Vec<(usize, i64)> = Vec::new();
    let mut receivers: Vec<(usize, i64)> = Vec::new();
    for &e in entities {
        match d[e] {
            v if v > 0 => payers.push((e, v)),
            v if v < 0 => receivers.push((e, -v)),
            _ => {}
        }
    }
    payers.sort_unstable();
    receivers.sort_unstable();

    let (mut p, mut q) = (0, 0);
    while p < payers.len() && q < receivers.len() {
        let amount = payers[p].1.min(receivers[q].1);
        plan.push(Transfer { from: payers[p].0, to: receivers[q].0, amount });
        payers[p].1 -= amount;
        receivers[q].1 -= amount;
        if payers[p].1 == 0 {
            p += 1;
        }
        if receivers[q].1 == 0 {
            q += 1;
        }
    }
    debug_assert!(p == payers.len() && q == receivers.len(), "entities do not sum to zero");
}

/// The trivial settlement: at most `n - 1` transfers, and at most `z - 1`
/// where `z` is the number of entities with nonzero debt.
pub fn greedy_settle(d: &DebtVector) -> TransactionPlan {
    let all: Vec<usize> = (0..d.len()).collect();
    let mut plan = TransactionPlan::default();
    greedy_over(d, &all, &mut plan);
    plan
}

/// Settles each block of `partition` independently. Transfers never cross block
/// boundaries, so the plan has at most `n - partition.len()` transfers.
pub fn settle_partition(d: &DebtVector, partition: &Partition) -> Result<TransactionPlan> {
    let mut plan = TransactionPlan::default();
    for (b, block) in partition.blocks().iter().enumerate() {
        let mut sum = 0i64;
        for &e in block {
            if e >= d.len() {
                return Err(Error::InvalidPartition(format!("entity {e} out of range")));
            }
            sum += d[e];
        }
        if sum != 0 {
            return Err(Error::InvalidPartition(format!("block {b} sums to {sum}")));
        }
        let mut block_plan = TransactionPlan::default();
        greedy_over(d, block, &mut block_plan);
        plan.extend(block_plan);
    }
    Ok(plan)
}

/// Transfers needed when `n` entities split into `blocks` zero-sum blocks.
pub fn transaction_count(n: usize, blocks: usize) -> usize {
    debug_assert!(blocks >= 1 && blocks <= n);
    n - blocks
}
