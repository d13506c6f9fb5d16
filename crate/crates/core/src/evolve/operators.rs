//! Recombination and mutation operators on permutation chromosomes.
//!
//! Positions are 0-based and ranges are inclusive: `mut1(c, 1, 4)` reverses
//! the second through fifth genes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fitness::cut_points;
use super::Chromosome;
use crate::debt::DebtVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recombination {
    /// Prefix of one parent, remainder in the other parent's order.
    Recomb1,
    /// Refine each parent with the other's zero-sum blocks.
    Recomb2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mutation {
    /// Segment inversion over genes.
    Mut1,
    /// Segment inversion over decoded blocks.
    Mut2,
    /// Segment inversion inside one decoded block.
    Mut3,
}

/// Child 1 takes the first `k` genes of `c1` followed by the remaining entities
/// in the order they appear in `c2`; child 2 is symmetric.
pub fn recomb1(c1: &Chromosome, c2: &Chromosome, k: usize) -> (Chromosome, Chromosome) {
    assert_eq!(c1.len(), c2.len(), "parents differ in length");
    assert!(k <= c1.len(), "crossover point {k} beyond length {}", c1.len());
    let mut used = vec![false; c1.len()];
    (
        Chromosome::from_genes_unchecked(prefix_then_rest(c1.genes(), c2.genes(), k, &mut used)),
        Chromosome::from_genes_unchecked(prefix_then_rest(c2.genes(), c1.genes(), k, &mut used)),
    )
}

fn prefix_then_rest(head: &[usize], tail: &[usize], k: usize, used: &mut [bool]) -> Vec<usize> {
    let mut out = Vec::with_capacity(head.len());
    for &g in &head[..k] {
        used[g] = true;
        out.push(g);
    }
    out.extend(tail.iter().copied().filter(|&g| !used[g]));
    used.fill(false);
    out
}

/// Block-structure-aware recombination.
///
/// Child 2 starts as `c2`. Each block `B` of `c1`, left to right, that is a
/// proper subset of a block `Q` of child 2's current decoding replaces `Q`
/// with `B` (in `c1`'s order) followed by `Q \ B` (in child 2's order). Child 1
/// is built the same way from `c1` with the blocks of `c2`. A rewrite splits
/// `Q` into at least two zero-sum blocks, so neither child has lower fitness
/// than the parent it started from.
pub fn recomb2(d: &DebtVector, c1: &Chromosome, c2: &Chromosome) -> (Chromosome, Chromosome) {
    assert_eq!(c1.len(), c2.len(), "parents differ in length");
    let child1 = refine(d, c1.genes(), c2.genes());
    let child2 = refine(d, c2.genes(), c1.genes());
    (Chromosome::from_genes_unchecked(child1), Chromosome::from_genes_unchecked(child2))
}

fn refine(d: &DebtVector, target: &[usize], donor: &[usize]) -> Vec<usize> {
    let mut working = BlockedGenes::new(d.values(), target.to_vec());
    let mut mark = vec![false; target.len()];
    let mut scratch = Vec::new();
    let mut start = 0;
    for end in cut_points(d, donor) {
        working.split_off(&donor[start..end], &mut mark, &mut scratch);
        start = end;
    }
    working.genes
}

/// Genes plus, for every position, the bounds of the zero-sum block holding it.
struct BlockedGenes<'a> {
    values: &'a [i64],
    genes: Vec<usize>,
    pos: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
}

impl<'a> BlockedGenes<'a> {
    fn new(values: &'a [i64], genes: Vec<usize>) -> Self {
        let n = genes.len();
        let mut pos = vec![0; n];
        for (p, &g) in genes.iter().enumerate() {
            pos[g] = p;
        }
        let mut this = Self { values, genes, pos, start: vec![0; n], end: vec![0; n] };
        this.relabel(0, n);
        this
    }

    /// Recomputes block bounds for positions `lo..hi`, a zero-sum span.
    fn relabel(&mut self, lo: usize, hi: usize) {
        let mut sum = 0i64;
        let mut s = lo;
        for p in lo..hi {
            sum += self.values[self.genes[p]];
            if sum == 0 {
                self.start[s..=p].fill(s);
                self.end[s..=p].fill(p + 1);
                s = p + 1;
            }
        }
        debug_assert_eq!(s, hi, "span does not sum to zero");
    }

    /// Moves `block` to the front of the block containing it when it is a
    /// proper subset of that block. Returns whether a rewrite happened.
    fn split_off(&mut self, block: &[usize], mark: &mut [bool], scratch: &mut Vec<usize>) -> bool {
        let p0 = self.pos[block[0]];
        let (s, e) = (self.start[p0], self.end[p0]);
        if e - s <= block.len() || !block.iter().all(|&g| self.start[self.pos[g]] == s) {
            return false;
        }
        for &g in block {
            mark[g] = true;
        }
        scratch.clear();
        scratch.extend_from_slice(block);
        scratch.extend(self.genes[s..e].iter().copied().filter(|&g| !mark[g]));
        for &g in block {
            mark[g] = false;
        }
        self.genes[s..e].copy_from_slice(scratch);
        for p in s..e {
            self.pos[self.genes[p]] = p;
        }
        self.relabel(s, e);
        true
    }
}

/// Reverses genes `i..=j`.
pub fn mut1(c: &Chromosome, i: usize, j: usize) -> Chromosome {
    let mut genes = c.genes().to_vec();
    invert(&mut genes, i, j);
    Chromosome::from_genes_unchecked(genes)
}

fn invert(genes: &mut [usize], i: usize, j: usize) {
    assert!(i < j && j < genes.len(), "invalid inversion bounds {i}..={j}");
    genes[i..=j].reverse();
}

/// Reverses the order of decoded blocks `i..=j`, keeping each block's genes in
/// their order. Fitness is unchanged.
pub fn mut2(d: &DebtVector, c: &Chromosome, i: usize, j: usize) -> Chromosome {
    let mut genes = c.genes().to_vec();
    let cuts = cut_points(d, &genes);
    invert_blocks(&mut genes, &cuts, i, j);
    Chromosome::from_genes_unchecked(genes)
}

fn block_bounds(cuts: &[usize], b: usize) -> (usize, usize) {
    (if b == 0 { 0 } else { cuts[b - 1] }, cuts[b])
}

fn invert_blocks(genes: &mut [usize], cuts: &[usize], i: usize, j: usize) {
    assert!(i < j && j < cuts.len(), "invalid block bounds {i}..={j}");
    let lo = block_bounds(cuts, i).0;
    let hi = cuts[j];
    // Reverse the whole span, then restore each block's internal order.
    genes[lo..hi].reverse();
    let mut at = lo;
    for b in (i..=j).rev() {
        let (s, e) = block_bounds(cuts, b);
        genes[at..at + (e - s)].reverse();
        at += e - s;
    }
}

/// Reverses genes `i..=j` of decoded block `k`, counted from the start of the
/// block. Block boundaries stay where they are, so fitness never drops.
pub fn mut3(d: &DebtVector, c: &Chromosome, k: usize, i: usize, j: usize) -> Chromosome {
    let mut genes = c.genes().to_vec();
    let cuts = cut_points(d, &genes);
    invert_in_block(&mut genes, &cuts, k, i, j);
    Chromosome::from_genes_unchecked(genes)
}

fn invert_in_block(genes: &mut [usize], cuts: &[usize], k: usize, i: usize, j: usize) {
    let (s, e) = block_bounds(cuts, k);
    assert!(i < j && j < e - s, "invalid in-block bounds {i}..={j} for block of size {}", e - s);
    genes[s + i..=s + j].reverse();
}

/// Uniform draw of `i < j` from `0..n`; requires `n >= 2`.
fn ordered_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

impl Recombination {
    /// Applies the operator with a uniformly drawn crossover point where one is
    /// needed.
    pub fn apply<R: Rng + ?Sized>(
        self,
        d: &DebtVector,
        c1: &Chromosome,
        c2: &Chromosome,
        rng: &mut R,
    ) -> (Chromosome, Chromosome) {
        match self {
            Recombination::Recomb1 if c1.is_empty() => (c1.clone(), c2.clone()),
            Recombination::Recomb1 => recomb1(c1, c2, rng.random_range(1..=c1.len())),
            Recombination::Recomb2 => recomb2(d, c1, c2),
        }
    }
}

impl Mutation {
    /// Mutates `c` in place with uniformly drawn parameters. Mut2 is the
    /// identity on single-block chromosomes, Mut3 when every block is a
    /// singleton.
    pub fn apply<R: Rng + ?Sized>(self, d: &DebtVector, c: &mut Chromosome, rng: &mut R) {
        let genes = c.genes_mut();
        match self {
            Mutation::Mut1 => {
                if genes.len() >= 2 {
                    let (i, j) = ordered_pair(genes.len(), rng);
                    invert(genes, i, j);
                }
            }
            Mutation::Mut2 => {
                let cuts = cut_points(d, genes);
                if cuts.len() >= 2 {
                    let (i, j) = ordered_pair(cuts.len(), rng);
                    invert_blocks(genes, &cuts, i, j);
                }
            }
            Mutation::Mut3 => {
                let cuts = cut_points(d, genes);
                let wide: Vec<usize> = (0..cuts.len())
                    .filter(|&b| {
                        let (s, e) = block_bounds(&cuts, b);
                        e - s >= 2
                    })
                    .collect();
                if !wide.is_empty() {
                    let k = wide[rng.random_range(0..wide.len())];
                    let (s, e) = block_bounds(&cuts, k);
                    let (i, j) = ordered_pair(e - s, rng);
                    invert_in_block(genes, &cuts, k, i, j);
                }
            }
        }
    }
}

impl fmt::Display for Recombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recombination::Recomb1 => "recomb1",
            Recombination::Recomb2 => "recomb2",
        })
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mutation::Mut1 => "mut1",
            Mutation::Mut2 => "mut2",
            Mutation::Mut3 => "mut3",
        })
    }
}

impl FromStr for Recombination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "recomb1" | "1" => Ok(Recombination::Recomb1),
            "recomb2" | "2" => Ok(Recombination::Recomb2),
            other => Err(format!("unknown recombination operator `{other}`")),
        }
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mut1" | "1" => Ok(Mutation::Mut1),
            "mut2" | "2" => Ok(Mutation::Mut2),
            "mut3" | "3" => Ok(Mutation::Mut3),
            other => Err(format!("unknown mutation operator `{other}`")),
        }
    }
}
