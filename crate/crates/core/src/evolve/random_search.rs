//! Baseline: the best of independent uniformly random permutations.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fitness::block_count;
use super::{Chromosome, GenerationRecord};
use crate::debt::DebtVector;
use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best: Chromosome,
    pub best_fitness: usize,
    /// One record per batch of `batch` samples, shaped like a GA history.
    pub history: Vec<GenerationRecord>,
}

/// Samples `evaluations` random permutations and returns the fittest
/// (the earliest one on ties).
pub fn random_search(d: &DebtVector, evaluations: usize, rng_seed: u64) -> Result<Chromosome> {
    Ok(random_search_batched(d, evaluations, 1000, rng_seed, Execution::default())?.best)
}

/// Random search in batches of `batch` samples. Each batch draws from its own
/// stream seeded by the coordinating RNG, so results do not depend on
/// `exec`. Records are numbered from 1; the GA's generation 0 has no analog.
pub fn random_search_batched(
    d: &DebtVector,
    evaluations: usize,
    batch: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<SearchResult> {
    if evaluations == 0 {
        return Err(Error::InvalidConfig("random search needs at least one evaluation".into()));
    }
    if batch == 0 {
        return Err(Error::InvalidConfig("batch size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let jobs: Vec<(usize, u64)> =
        (0..evaluations.div_ceil(batch)).map(|b| (batch.min(evaluations - b * batch), rng.next_u64())).collect();

    let batches = exec.map(&jobs, |&(size, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<(usize, Chromosome)> = None;
        let mut total = 0usize;
        for _ in 0..size {
            let c = Chromosome::random(d.len(), &mut rng);
            let f = block_count(d, c.genes());
            total += f;
            if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
                best = Some((f, c));
            }
        }
        let (f, c) = best.expect("batch is non-empty");
        (f, c, total as f64 / size as f64)
    });

    let mut best: Option<(usize, Chromosome)> = None;
    let mut history = Vec::with_capacity(batches.len());
    for (generation, (f, c, mean)) in batches.into_iter().enumerate() {
        if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
            best = Some((f, c));
        }
        let best_fitness = best.as_ref().map_or(0, |(bf, _)| *bf);
        history.push(GenerationRecord { generation: generation + 1, best_fitness, mean_fitness: mean });
    }
    let (best_fitness, best) = best.expect("at least one batch");
    Ok(SearchResult { best, best_fitness, history })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_instances() {
        let zeros = DebtVector::new(vec![0; 6]).unwrap();
        let c = random_search(&zeros, 1, 0).unwrap();
        assert_eq!(block_count(&zeros, c.genes()), 6);

        let pair = DebtVector::new(vec![3, -3]).unwrap();
        assert_eq!(block_count(&pair, random_search(&pair, 50, 4).unwrap().genes()), 1);
        assert!(random_search(&pair, 0, 4).is_err());
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let d = DebtVector::new((1..=20).chain((1..=20).map(|x| -x)).collect()).unwrap();
        let a = random_search_batched(&d, 2500, 100, 17, Execution::Sequential).unwrap();
        let b = random_search_batched(&d, 2500, 100, 17, Execution::Parallel).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.history, b.history);
        assert_eq!(a.history.len(), 25);
        assert!(a.history.windows(2).all(|w| w[0].best_fitness <= w[1].best_fitness));
    }
}
