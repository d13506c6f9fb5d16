use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A permutation of the entity indices `0..n`.
///
/// Genes are entity indices rather than debt values so that entities sharing a
/// value (e.g. several zeros) stay distinguishable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chromosome(Vec<usize>);

impl Chromosome {
    pub fn new(genes: Vec<usize>) -> Result<Self> {
        if !is_permutation(&genes) {
            return Err(Error::InvalidConfig(format!("genes are not a permutation of 0..{}", genes.len())));
        }
        Ok(Self(genes))
    }

    pub(crate) fn from_genes_unchecked(genes: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&genes));
        Self(genes)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut genes: Vec<usize> = (0..n).collect();
        genes.shuffle(rng);
        Self(genes)
    }

    /// Callers must leave the genes a permutation.
    pub(crate) fn genes_mut(&mut self) -> &mut [usize] {
        &mut self.0
    }

    pub fn genes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_genes(self) -> Vec<usize> {
        self.0
    }

    pub fn is_valid(&self) -> bool {
        is_permutation(&self.0)
    }
}

pub fn is_permutation(genes: &[usize]) -> bool {
    let mut seen = vec![false; genes.len()];
    genes.iter().all(|&g| g < seen.len() && !std::mem::replace(&mut seen[g], true))
}
