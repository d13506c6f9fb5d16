//! Genetic search over permutation-encoded zero-sum partitions.
//!
//! A chromosome lists every entity once; cutting it wherever the running sum
//! of debt values hits zero yields a zero-sum partition, and the number of
//! blocks is the fitness to maximize.

mod chromosome;
pub mod fitness;
mod ga;
pub mod operators;
mod random_search;

pub use chromosome::{is_permutation, Chromosome};
pub use fitness::{block_count, decode, fitness, FitnessReport};
pub use ga::{evolve, evolve_with, EvolutionResult, GAConfig, GenerationRecord};
pub use operators::{mut1, mut2, mut3, recomb1, recomb2, Mutation, Recombination};
pub use random_search::{random_search, random_search_batched, SearchResult};
