//! Batch experiment harness: repeated seeded runs over instance files, with
//! per-run fitness histories and a summary row per instance.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::debt::{DebtVector, Partition, TransactionPlan};
use crate::error::{Error, Result};
use crate::evolve::{decode, evolve_with, random_search_batched, GAConfig, GenerationRecord};
use crate::format::{parse_instance, InstanceMeta};
use crate::generate::OptimumKind;
use crate::oracle::exact_max_partition;
use crate::par::Execution;
use crate::settle::{greedy_settle, settle_partition, verify_clearing};

pub const HISTORY_HEADER: &str = "generation,best_fitness,mean_fitness";
pub const SUMMARY_HEADER: &str = "n,best,best_pct,avg,avg_pct,seconds";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Ga,
    RandomSearch,
    Greedy,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub instances: Vec<PathBuf>,
    pub algorithm: Algorithm,
    /// GA parameters. Random search spends `population_size * generations`
    /// evaluations in batches of `population_size`. `rng_seed` is the seed of
    /// the first repetition; repetition `r` uses `rng_seed + r`.
    #[serde(default)]
    pub ga: GAConfig,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default = "one")]
    pub history_stride: usize,
}

fn one() -> usize {
    1
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() {
            return Err(Error::InvalidConfig("no instances given".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
        }
        if self.history_stride == 0 {
            return Err(Error::InvalidConfig("history_stride must be at least 1".into()));
        }
        if matches!(self.algorithm, Algorithm::Ga | Algorithm::RandomSearch) {
            self.ga.validate()?;
        }
        Ok(())
    }
}

/// Result of one seeded run of one algorithm on one instance.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub seed: u64,
    pub best_fitness: usize,
    pub partition: Partition,
    pub plan: TransactionPlan,
    pub history: Vec<GenerationRecord>,
    pub seconds: f64,
}

/// Runs `algorithm` once on `d`. The returned plan has been checked to clear `d`.
pub fn run_once(d: &DebtVector, algorithm: Algorithm, cfg: &GAConfig, exec: Execution) -> Result<RunOutcome> {
    let started = Instant::now();
    let (partition, history) = match algorithm {
        Algorithm::Ga => {
            let r = evolve_with(d, cfg, exec)?;
            (decode(d, &r.best), r.history)
        }
        Algorithm::RandomSearch => {
            cfg.validate()?;
            let evaluations = (cfg.population_size * cfg.generations).max(1);
            return run_random_search(d, evaluations, cfg.population_size, cfg.rng_seed, exec);
        }
        Algorithm::Exact => {
            let r = exact_max_partition(d)?;
            let record =
                GenerationRecord { generation: 0, best_fitness: r.max_blocks, mean_fitness: r.max_blocks as f64 };
            (r.witness, vec![record])
        }
        Algorithm::Greedy => {
            let plan = greedy_settle(d);
            let blocks = d.len() - plan.len();
            let record = GenerationRecord { generation: 0, best_fitness: blocks, mean_fitness: blocks as f64 };
            let whole = Partition::from_blocks_unchecked(vec![(0..d.len()).collect()]);
            let outcome = RunOutcome {
                seed: cfg.rng_seed,
                best_fitness: blocks,
                partition: whole,
                plan,
                history: vec![record],
                seconds: started.elapsed().as_secs_f64(),
            };
            return checked(d, outcome);
        }
    };
    let plan = settle_partition(d, &partition)?;
    let outcome = RunOutcome {
        seed: cfg.rng_seed,
        best_fitness: partition.len(),
        partition,
        plan,
        history,
        seconds: started.elapsed().as_secs_f64(),
    };
    checked(d, outcome)
}

/// Random search with an exact evaluation budget, sampled in batches.
pub fn run_random_search(
    d: &DebtVector,
    evaluations: usize,
    batch: usize,
    seed: u64,
    exec: Execution,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let r = random_search_batched(d, evaluations, batch, seed, exec)?;
    let partition = decode(d, &r.best);
    let plan = settle_partition(d, &partition)?;
    let outcome = RunOutcome {
        seed,
        best_fitness: partition.len(),
        partition,
        plan,
        history: r.history,
        seconds: started.elapsed().as_secs_f64(),
    };
    checked(d, outcome)
}

fn checked(d: &DebtVector, outcome: RunOutcome) -> Result<RunOutcome> {
    if !verify_clearing(d, &outcome.plan) {
        return Err(Error::InvalidTransfer("solver produced a plan that does not clear the debts".into()));
    }
    Ok(outcome)
}

/// History CSV keeping every `stride`-th generation plus the final one.
pub fn history_csv(history: &[GenerationRecord], stride: usize) -> String {
    let mut out = format!("{HISTORY_HEADER}\n");
    let last = history.last().map(|h| h.generation);
    for h in history.iter().filter(|h| h.generation % stride == 0 || Some(h.generation) == last) {
        let _ = writeln!(out, "{},{},{:.4}", h.generation, h.best_fitness, h.mean_fitness);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub instance: PathBuf,
    pub n: usize,
    pub best: usize,
    pub avg: f64,
    pub claimed_optimum: Option<usize>,
    pub optimum_kind: Option<OptimumKind>,
    pub seconds: f64,
}

impl SummaryRow {
    fn pct(&self, value: f64) -> Option<f64> {
        self.claimed_optimum.filter(|&c| c > 0).map(|c| 100.0 * value / c as f64)
    }

    pub fn best_pct(&self) -> Option<f64> {
        self.pct(self.best as f64)
    }

    pub fn avg_pct(&self) -> Option<f64> {
        self.pct(self.avg)
    }

    pub fn csv_line(&self) -> String {
        let pct = |p: Option<f64>| p.map(|p| format!("{p:.1}")).unwrap_or_default();
        format!(
            "{},{},{},{:.1},{},{:.3}",
            self.n,
            self.best,
            pct(self.best_pct()),
            self.avg,
            pct(self.avg_pct()),
            self.seconds
        )
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub row: SummaryRow,
    pub runs: Vec<RunOutcome>,
}

/// Runs every repetition on one debt vector. Repetitions run in parallel when
/// `exec` allows; each run is independent and seeded `seed + r`.
pub fn run_repetitions(
    d: &DebtVector,
    meta: &InstanceMeta,
    spec: &ExperimentSpec,
    instance: &Path,
    exec: Execution,
) -> Result<InstanceReport> {
    let seeds: Vec<u64> = (0..spec.repetitions as u64).map(|r| spec.ga.rng_seed.wrapping_add(r)).collect();
    let runs = exec
        .map(&seeds, |&seed| {
            let cfg = GAConfig { rng_seed: seed, ..spec.ga.clone() };
            // The outer map already saturates the pool.
            run_once(d, spec.algorithm, &cfg, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let best = runs.iter().map(|r| r.best_fitness).max().unwrap_or(0);
    let avg = runs.iter().map(|r| r.best_fitness as f64).sum::<f64>() / runs.len() as f64;
    let row = SummaryRow {
        instance: instance.to_path_buf(),
        n: d.len(),
        best,
        avg,
        claimed_optimum: meta.claimed_optimum,
        optimum_kind: meta.optimum_kind,
        seconds: runs.iter().map(|r| r.seconds).sum(),
    };
    Ok(InstanceReport { row, runs })
}

/// Runs the experiment and writes `summary.csv` plus one
/// `<instance>.run<r>.csv` history per run into `out_dir`. All files are
/// written after the runs finish.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path, exec: Execution) -> Result<Vec<InstanceReport>> {
    spec.validate()?;
    let mut reports = Vec::with_capacity(spec.instances.len());
    for path in &spec.instances {
        let parsed = parse_instance(path)?;
        let d = parsed.instance.debt_vector()?;
        reports.push(run_repetitions(&d, &parsed.meta, spec, path, exec)?);
    }

    fs::create_dir_all(out_dir)?;
    for report in &reports {
        let stem = report.row.instance.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
        for (r, run) in report.runs.iter().enumerate() {
            fs::write(out_dir.join(format!("{stem}.run{r}.csv")), history_csv(&run.history, spec.history_stride))?;
        }
    }
    let rows: Vec<SummaryRow> = reports.iter().map(|r| r.row.clone()).collect();
    fs::write(out_dir.join("summary.csv"), summary_csv(&rows))?;
    Ok(reports)
}
