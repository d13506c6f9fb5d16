//! Decoding a chromosome into zero-sum blocks.
//!
//! Walk the genes in order keeping the running sum of their debt values; every
//! position where the running sum returns to zero closes a block. The fitness
//! is the number of blocks. Because the whole vector sums to zero, the last
//! position always closes a block.

use super::Chromosome;
use crate::debt::{DebtVector, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitnessReport {
    pub fitness: usize,
    /// Prefix lengths `i` (1..=n) whose running sum is zero; block `b` spans
    /// genes `cut_points[b-1]..cut_points[b]`.
    pub cut_points: Vec<usize>,
}

/// Block count of a gene sequence, without allocating.
pub fn block_count(d: &DebtVector, genes: &[usize]) -> usize {
    let values = d.values();
    let mut sum = 0i64;
    let mut blocks = 0;
    for &g in genes {
        sum += values[g];
        blocks += usize::from(sum == 0);
    }
    blocks
}

pub(crate) fn cut_points(d: &DebtVector, genes: &[usize]) -> Vec<usize> {
    let values = d.values();
    let mut sum = 0i64;
    let mut cuts = Vec::new();
    for (i, &g) in genes.iter().enumerate() {
        sum += values[g];
        if sum == 0 {
            cuts.push(i + 1);
        }
    }
    cuts
}

pub fn fitness(d: &DebtVector, c: &Chromosome) -> FitnessReport {
    let cut_points = cut_points(d, c.genes());
    FitnessReport { fitness: cut_points.len(), cut_points }
}

/// Blocks in chromosome order; their count equals the fitness.
pub fn decode(d: &DebtVector, c: &Chromosome) -> Partition {
    let genes = c.genes();
    let mut start = 0;
    let blocks = cut_points(d, genes)
        .into_iter()
        .map(|end| {
            let block = genes[start..end].to_vec();
            start = end;
            block
        })
        .collect();
    Partition::from_blocks_unchecked(blocks)
}
