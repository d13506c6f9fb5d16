use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use debtclear::error::Error;
use debtclear::evolve::{GAConfig, Mutation, Recombination};
use debtclear::experiment::{
    run_experiment, run_once, run_random_search, summary_csv, Algorithm, ExperimentSpec, RunOutcome,
};
use debtclear::format::{self, InstanceMeta};
use debtclear::generate::{self, GeneratedInstance, Method3Params, MethodParams, OptimumKind};
use debtclear::par::Execution;
use debtclear::DebtVector;

/// Settle group debts with the fewest transfers.
#[derive(Debug, Parser)]
#[command(name = "debtclear", version)]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve with the genetic algorithm.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        ga: GaArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Write the fitness history CSV here.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// Settle greedily with at most n - 1 transfers.
    Greedy {
        instance: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve exactly (at most 20 entities with nonzero debt).
    Exact {
        instance: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Best of uniformly random permutations.
    RandomSearch {
        instance: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        evaluations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate an instance with a known or claimed optimum.
    Gen {
        #[command(subcommand)]
        method: GenMethod,
        /// Output debt file (stdout when omitted).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a TOML file.
    Bench {
        config: PathBuf,
        #[arg(long, default_value = "bench-out")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct GaArgs {
    #[arg(long, default_value_t = 80)]
    population_size: usize,
    #[arg(long, default_value_t = 5000)]
    generations: usize,
    #[arg(long, default_value_t = 5)]
    elite_count: usize,
    #[arg(long, default_value_t = 0.75)]
    mutation_probability: f64,
    #[arg(long, default_value = "recomb2")]
    recombination: Recombination,
    #[arg(long, default_value = "mut1")]
    mutation: Mutation,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GaArgs {
    fn config(&self) -> GAConfig {
        GAConfig {
            population_size: self.population_size,
            generations: self.generations,
            elite_count: self.elite_count,
            mutation_probability: self.mutation_probability,
            recombination: self.recombination,
            mutation: self.mutation,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Solution file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenMethod {
    /// Pad a base instance with zeros.
    Method1 {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        zeros: usize,
    },
    /// Pad with (x, -x) pairs; without --base starts from the empty instance.
    Method2 {
        #[arg(long)]
        base: Option<PathBuf>,
        /// Comma-separated values and ranges, e.g. `1..=50` or `3,7,10..=12`.
        #[arg(long, value_parser = parse_pairs)]
        pairs: PairList,
    },
    /// Positives plus two negated group sums with a unique optimal split.
    Method3 {
        #[arg(long)]
        count_positive: usize,
        #[arg(long, default_value_t = 1)]
        min: i64,
        #[arg(long)]
        max: i64,
        /// Defaults to half of --count-positive.
        #[arg(long)]
        group_size: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        attempts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Positives cut into l runs, negated run sums appended.
    Method4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        min: i64,
        #[arg(long)]
        max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Concatenate copies of a base instance.
    Method5 {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        copies: usize,
    },
}

#[derive(Clone, Debug)]
struct PairList(Vec<i64>);

fn parse_pairs(text: &str) -> Result<PairList, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..=") {
            let lo: i64 = lo.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
            let hi: i64 = hi.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|e| format!("`{part}`: {e}"))?);
        }
    }
    Ok(PairList(out))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InstanceTooLarge { .. } | Error::GenerationFailed(_) => 3,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<(DebtVector, InstanceMeta), Error> {
    let parsed = format::parse_instance(path)?;
    Ok((parsed.instance.debt_vector()?, parsed.meta))
}

fn load_base(path: &Path) -> Result<GeneratedInstance, Error> {
    let (d, meta) = load(path)?;
    match meta.claimed_optimum {
        Some(claimed_optimum) => Ok(GeneratedInstance {
            d,
            claimed_optimum,
            optimum_kind: meta.optimum_kind.unwrap_or(OptimumKind::LowerBoundClaimedExact),
            method: meta.method.unwrap_or(0),
            seed: meta.seed.unwrap_or(0),
            params: MethodParams::Base,
        }),
        None => GeneratedInstance::from_oracle(d),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report(run: &RunOutcome, d: &DebtVector, meta: &InstanceMeta, out: &OutArgs) -> Result<(), Error> {
    let optimum = match (meta.claimed_optimum, meta.optimum_kind) {
        (Some(c), Some(k)) => format!(" (claimed optimum {c}, {k})"),
        (Some(c), None) => format!(" (claimed optimum {c})"),
        _ => String::new(),
    };
    eprintln!("n: {}", d.len());
    eprintln!("blocks: {}{optimum}", run.best_fitness);
    eprintln!("transfers: {}", run.plan.len());
    emit(&format::solution_to_string(&run.plan), out.out.as_deref())
}

fn solve(
    algorithm: Algorithm,
    instance: &Path,
    cfg: &GAConfig,
    out: &OutArgs,
    exec: Execution,
) -> Result<RunOutcome, Error> {
    let (d, meta) = load(instance)?;
    if matches!(algorithm, Algorithm::Ga | Algorithm::RandomSearch) {
        eprintln!("seed: {}", cfg.rng_seed);
    }
    // run_once refuses to return a plan that does not clear `d`.
    let run = run_once(&d, algorithm, cfg, exec)?;
    report(&run, &d, &meta, out)?;
    Ok(run)
}

fn generate(method: GenMethod) -> Result<GeneratedInstance, Error> {
    match method {
        GenMethod::Method1 { base, zeros } => generate::gen_method1(&load_base(&base)?, zeros),
        GenMethod::Method2 { base, pairs } => {
            let base = match base {
                Some(path) => load_base(&path)?,
                None => GeneratedInstance::empty(),
            };
            generate::gen_method2(&base, &pairs.0)
        }
        GenMethod::Method3 { count_positive, min, max, group_size, attempts, seed } => {
            let mut params = Method3Params::new(count_positive, min..=max);
            params.max_attempts = attempts;
            if let Some(g) = group_size {
                params.group_size = g;
            }
            generate::gen_method3(&params, seed)
        }
        GenMethod::Method4 { n, l, min, max, seed } => generate::gen_method4(n, l, min..=max, seed),
        GenMethod::Method5 { base, copies } => generate::gen_method5(&load_base(&base)?, copies),
    }
}

fn bench(config: &Path, out_dir: &Path, exec: Execution) -> Result<(), Error> {
    let text = std::fs::read_to_string(config)?;
    let spec: ExperimentSpec =
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", config.display())))?;
    eprintln!("seeds: {}..{}", spec.ga.rng_seed, spec.ga.rng_seed + spec.repetitions as u64);
    let reports = run_experiment(&spec, out_dir, exec)?;
    for r in &reports {
        let kind = r.row.optimum_kind.map(|k| format!(" [{k}]")).unwrap_or_default();
        eprintln!("{}: best {} avg {:.1}{kind}", r.row.instance.display(), r.row.best, r.row.avg);
    }
    let rows: Vec<_> = reports.into_iter().map(|r| r.row).collect();
    print!("{}", summary_csv(&rows));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.command {
        Command::Solve { instance, ga, out, history } => {
            let run = solve(Algorithm::Ga, &instance, &ga.config(), &out, exec)?;
            if let Some(path) = history {
                std::fs::write(path, debtclear::experiment::history_csv(&run.history, 1))?;
            }
        }
        Command::Greedy { instance, out } => {
            solve(Algorithm::Greedy, &instance, &GAConfig::default(), &out, exec)?;
        }
        Command::Exact { instance, out } => {
            solve(Algorithm::Exact, &instance, &GAConfig::default(), &out, exec)?;
        }
        Command::RandomSearch { instance, evaluations, seed, out } => {
            let (d, meta) = load(&instance)?;
            eprintln!("seed: {seed}");
            let run = run_random_search(&d, evaluations, 1000, seed, exec)?;
            report(&run, &d, &meta, &out)?;
        }
        Command::Gen { method, out } => {
            let inst = generate(method)?;
            eprintln!("seed: {}", inst.seed);
            eprintln!("n: {}, claimed optimum: {} ({})", inst.n(), inst.claimed_optimum, inst.optimum_kind);
            emit(&format::debts_to_string(&inst.d, &InstanceMeta::from(&inst)), out.as_deref())?;
        }
        Command::Bench { config, out_dir } => bench(&config, &out_dir, exec)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
