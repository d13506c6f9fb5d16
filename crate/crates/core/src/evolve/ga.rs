//! Generational GA with elitism and binary tournament selection.
//!
//! Each generation:
//!
//! 1. the population is sorted by fitness (stable, descending, offspring
//!    ahead of surviving elites on ties);
//! 2. the top `elite_count` individuals are copied unchanged;
//! 3. the remaining slots are filled in pairs: two tournament winners are
//!    recombined, each child is mutated with probability
//!    `mutation_probability`, then evaluated. An odd last slot keeps only the
//!    first child.
//!
//! All selection draws and one RNG seed per pair come from the coordinating
//! ChaCha8 stream; pairs are then built independently (in parallel when
//! enabled). A run is therefore a pure function of the instance, the config
//! and `rng_seed`, whatever the execution mode.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fitness::block_count;
use super::{Chromosome, Mutation, Recombination};
use crate::debt::DebtVector;
use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GAConfig {
    pub population_size: usize,
    pub generations: usize,
    pub elite_count: usize,
    pub mutation_probability: f64,
    pub recombination: Recombination,
    pub mutation: Mutation,
    pub rng_seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        Self {
            population_size: 80,
            generations: 5000,
            elite_count: 5,
            mutation_probability: 0.75,
            recombination: Recombination::Recomb2,
            mutation: Mutation::Mut1,
            rng_seed: 0,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig("population_size must be at least 2".into()));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::InvalidConfig(format!(
                "elite_count {} must be below population_size {}",
                self.elite_count, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(Error::InvalidConfig(format!(
                "mutation_probability {} is outside [0, 1]",
                self.mutation_probability
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Best fitness seen up to and including this generation.
    pub best_fitness: usize,
    pub mean_fitness: f64,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub best: Chromosome,
    pub best_fitness: usize,
    /// One record per generation; entry 0 describes the initial population.
    pub history: Vec<GenerationRecord>,
}

#[derive(Clone, Debug)]
struct Individual {
    chromosome: Chromosome,
    fitness: usize,
}

pub fn evolve(d: &DebtVector, cfg: &GAConfig) -> Result<EvolutionResult> {
    evolve_with(d, cfg, Execution::default())
}

pub fn evolve_with(d: &DebtVector, cfg: &GAConfig, exec: Execution) -> Result<EvolutionResult> {
    cfg.validate()?;
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let initial: Vec<Chromosome> = (0..cfg.population_size).map(|_| Chromosome::random(n, &mut rng)).collect();
    let mut population: Vec<Individual> =
        exec.map_owned(initial, |chromosome| Individual { fitness: block_count(d, chromosome.genes()), chromosome });
    sort_population(&mut population);

    let mut best = population[0].clone();
    let mut history = Vec::with_capacity(cfg.generations + 1);
    history.push(record(0, best.fitness, &population));

    let slots = cfg.population_size - cfg.elite_count;
    let pair_count = slots.div_ceil(2);
    for generation in 1..=cfg.generations {
        let jobs: Vec<(usize, usize, u64)> = (0..pair_count)
            .map(|_| {
                let a = tournament(&population, &mut rng);
                let b = tournament(&population, &mut rng);
                (a, b, rng.next_u64())
            })
            .collect();

        let parents = &population;
        let offspring =
            exec.map(&jobs, |&(a, b, seed)| breed(d, cfg, &parents[a].chromosome, &parents[b].chromosome, seed));

        // Offspring go first so the stable sort ranks them above elites of
        // equal fitness; without this drift along fitness plateaus stalls.
        let mut next: Vec<Individual> = Vec::with_capacity(cfg.population_size);
        next.extend(offspring.into_iter().flat_map(|(x, y)| [x, y]).take(slots));
        next.extend(population[..cfg.elite_count].iter().cloned());
        population = next;
        sort_population(&mut population);

        if population[0].fitness > best.fitness {
            best = population[0].clone();
        }
        history.push(record(generation, best.fitness, &population));
    }

    Ok(EvolutionResult { best_fitness: best.fitness, best: best.chromosome, history })
}

fn sort_population(population: &mut [Individual]) {
    population.sort_by_key(|i| std::cmp::Reverse(i.fitness));
}

fn record(generation: usize, best_fitness: usize, population: &[Individual]) -> GenerationRecord {
    let total: usize = population.iter().map(|i| i.fitness).sum();
    GenerationRecord { generation, best_fitness, mean_fitness: total as f64 / population.len() as f64 }
}

/// Binary tournament with replacement; ties go to the first draw.
fn tournament<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> usize {
    let a = rng.random_range(0..population.len());
    let b = rng.random_range(0..population.len());
    if population[b].fitness > population[a].fitness {
        b
    } else {
        a
    }
}

fn breed(d: &DebtVector, cfg: &GAConfig, p1: &Chromosome, p2: &Chromosome, seed: u64) -> (Individual, Individual) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut c1, mut c2) = cfg.recombination.apply(d, p1, p2, &mut rng);
    for c in [&mut c1, &mut c2] {
        if rng.random_bool(cfg.mutation_probability) {
            cfg.mutation.apply(d, c, &mut rng);
        }
    }
    let eval = |chromosome: Chromosome| Individual { fitness: block_count(d, chromosome.genes()), chromosome };
    (eval(c1), eval(c2))
}
