//! Instance generators with known or claimed optima.
//!
//! | method | construction                                   | optimum                 |
//! |--------|------------------------------------------------|-------------------------|
//! | 1      | append `k` zeros                               | base + k, kind kept     |
//! | 2      | append pairs `(x, -x)`                         | base + pairs, claimed   |
//! | 3      | positives plus two negated group sums, unique  | exactly 2               |
//! | 4      | positives plus negated sums of `l` runs        | `l`, claimed            |
//! | 5      | concatenate copies                             | base * copies, claimed  |
//!
//! "Claimed" optima are lower bounds by construction that are reported as the
//! optimum; the oracle can certify them on small instances.

use std::fmt;
use std::ops::RangeInclusive;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::debt::{DebtVector, MAX_MAGNITUDE};
use crate::error::{Error, Result};
use crate::oracle::{count_subset_sums, exact_max_partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumKind {
    /// The optimum is proven (or computed exactly).
    Exact,
    /// The construction guarantees at least this many blocks and asserts no more exist.
    LowerBoundClaimedExact,
}

impl fmt::Display for OptimumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimumKind::Exact => "exact",
            OptimumKind::LowerBoundClaimedExact => "lower_bound_claimed_exact",
        })
    }
}

impl std::str::FromStr for OptimumKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(OptimumKind::Exact),
            "lower_bound_claimed_exact" => Ok(OptimumKind::LowerBoundClaimedExact),
            other => Err(format!("unknown optimum kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MethodParams {
    /// The empty instance, or one whose optimum came from the exact oracle.
    Base,
    Zeros {
        k: usize,
    },
    Pairs {
        pairs: Vec<i64>,
    },
    SubsetSum {
        count_positive: usize,
        min: i64,
        max: i64,
        group_size: usize,
        attempts: usize,
    },
    Runs {
        n: usize,
        l: usize,
        min: i64,
        max: i64,
    },
    Copies {
        copies: usize,
    },
}

impl fmt::Display for MethodParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodParams::Base => write!(f, "base"),
            MethodParams::Zeros { k } => write!(f, "zeros k={k}"),
            MethodParams::Pairs { pairs } => write!(f, "pairs count={}", pairs.len()),
            MethodParams::SubsetSum { count_positive, min, max, group_size, attempts } => write!(
                f,
                "subset_sum count_positive={count_positive} range={min}..={max} group_size={group_size} attempts={attempts}"
            ),
            MethodParams::Runs { n, l, min, max } => write!(f, "runs n={n} l={l} range={min}..={max}"),
            MethodParams::Copies { copies } => write!(f, "copies copies={copies}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub d: DebtVector,
    pub claimed_optimum: usize,
    pub optimum_kind: OptimumKind,
    /// 1-5 for the generating method of the last step, 0 for a base instance.
    pub method: u8,
    pub seed: u64,
    pub params: MethodParams,
}

impl GeneratedInstance {
    /// The neutral starting point for methods 1, 2 and 5: no entities, optimum 0.
    pub fn empty() -> Self {
        Self {
            d: DebtVector::new(Vec::new()).expect("empty vector sums to zero"),
            claimed_optimum: 0,
            optimum_kind: OptimumKind::Exact,
            method: 0,
            seed: 0,
            params: MethodParams::Base,
        }
    }

    /// Wraps an arbitrary small instance, taking its optimum from the oracle.
    pub fn from_oracle(d: DebtVector) -> Result<Self> {
        let claimed_optimum = exact_max_partition(&d)?.max_blocks;
        Ok(Self {
            d,
            claimed_optimum,
            optimum_kind: OptimumKind::Exact,
            method: 0,
            seed: 0,
            params: MethodParams::Base,
        })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }
}

fn extended(base: &DebtVector, extra: impl IntoIterator<Item = i64>) -> Result<DebtVector> {
    let mut values = base.values().to_vec();
    values.extend(extra);
    DebtVector::new(values)
}

/// Method 1: pad with `k` zeros.
pub fn gen_method1(base: &GeneratedInstance, k: usize) -> Result<GeneratedInstance> {
    Ok(GeneratedInstance {
        d: extended(&base.d, std::iter::repeat_n(0, k))?,
        claimed_optimum: base.claimed_optimum + k,
        optimum_kind: base.optimum_kind,
        method: 1,
        seed: base.seed,
        params: MethodParams::Zeros { k },
    })
}

/// Method 2: pad with one `(x, -x)` pair per entry of `pairs`.
pub fn gen_method2(base: &GeneratedInstance, pairs: &[i64]) -> Result<GeneratedInstance> {
    if let Some(bad) = pairs.iter().find(|&&x| x <= 0) {
        return Err(Error::InvalidConfig(format!("pair value {bad} is not positive")));
    }
    if pairs.is_empty() {
        return Ok(base.clone());
    }
    Ok(GeneratedInstance {
        d: extended(&base.d, pairs.iter().flat_map(|&x| [x, -x]))?,
        claimed_optimum: base.claimed_optimum + pairs.len(),
        optimum_kind: OptimumKind::LowerBoundClaimedExact,
        method: 2,
        seed: base.seed,
        params: MethodParams::Pairs { pairs: pairs.to_vec() },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Method3Params {
    pub count_positive: usize,
    pub value_range: RangeInclusive<i64>,
    /// Size of the group whose sum must be uniquely attained.
    pub group_size: usize,
    /// Rejection-sampling budget for the uniqueness certificate.
    pub max_attempts: usize,
}

impl Method3Params {
    pub fn new(count_positive: usize, value_range: RangeInclusive<i64>) -> Self {
        Self { count_positive, value_range, group_size: count_positive / 2, max_attempts: 1000 }
    }
}

fn check_value_range(range: &RangeInclusive<i64>) -> Result<()> {
    if *range.start() < 1 || range.start() > range.end() || *range.end() > MAX_MAGNITUDE {
        return Err(Error::InvalidConfig(format!(
            "value range {}..={} must be a non-empty range of positive values within {MAX_MAGNITUDE}",
            range.start(),
            range.end()
        )));
    }
    Ok(())
}

/// Method 3: random positives, split into two groups; the negated group sums
/// are appended. Draws are repeated until the first group is the only subset
/// of the positives reaching its sum, which makes the optimal partition
/// unique. The optimum is exactly 2: every block needs one of the two
/// negatives.
pub fn gen_method3(params: &Method3Params, rng_seed: u64) -> Result<GeneratedInstance> {
    let Method3Params { count_positive, ref value_range, group_size, max_attempts } = *params;
    if count_positive < 2 {
        return Err(Error::InvalidConfig("method 3 needs at least two positive values".into()));
    }
    if group_size == 0 || group_size >= count_positive {
        return Err(Error::InvalidConfig(format!("group size {group_size} must be in 1..{count_positive}")));
    }
    check_value_range(value_range)?;

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut indices: Vec<usize> = (0..count_positive).collect();
    for attempt in 1..=max_attempts {
        let positives: Vec<u64> = (0..count_positive).map(|_| rng.random_range(value_range.clone()) as u64).collect();
        indices.shuffle(&mut rng);
        let group = &indices[..group_size];
        if let Ok(mut inst) = method3_from_split(&positives, group) {
            inst.seed = rng_seed;
            inst.params = MethodParams::SubsetSum {
                count_positive,
                min: *value_range.start(),
                max: *value_range.end(),
                group_size,
                attempts: attempt,
            };
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no uniquely attained split in {max_attempts} attempts; widen the value range or shrink the group"
    )))
}

/// Builds the method-3 instance for the given positives and first group
/// (indices into `positives`), failing unless the group's sum is attained by
/// exactly one subset.
pub fn method3_from_split(positives: &[u64], group: &[usize]) -> Result<GeneratedInstance> {
    let first: u64 = group.iter().map(|&i| positives[i]).sum();
    let total: u64 = positives.iter().sum();
    let ways = count_subset_sums(positives, first);
    if ways != 1 {
        return Err(Error::GenerationFailed(format!("{ways} subsets reach the group sum {first}")));
    }
    let mut values: Vec<i64> = positives.iter().map(|&v| v as i64).collect();
    values.push(-(first as i64));
    values.push(-((total - first) as i64));
    Ok(GeneratedInstance {
        d: DebtVector::new(values)?,
        claimed_optimum: 2,
        optimum_kind: OptimumKind::Exact,
        method: 3,
        seed: 0,
        params: MethodParams::Base,
    })
}

/// Method 4: `n - l` random positives cut into `l` consecutive runs; the
/// negated run sums are appended. The final run always ends at the last
/// positive so the instance balances; the other `l - 1` cut points are drawn
/// without replacement.
pub fn gen_method4(n: usize, l: usize, value_range: RangeInclusive<i64>, rng_seed: u64) -> Result<GeneratedInstance> {
    if l == 0 || l > n / 2 {
        return Err(Error::InvalidConfig(format!("cut count {l} must be in 1..={}", n / 2)));
    }
    check_value_range(&value_range)?;
    let count = n - l;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let positives: Vec<i64> = (0..count).map(|_| rng.random_range(value_range.clone())).collect();
    let mut cuts: Vec<usize> = index::sample(&mut rng, count - 1, l - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(count);

    let mut inst = method4_from_parts(&positives, &cuts)?;
    inst.seed = rng_seed;
    inst.params = MethodParams::Runs { n, l, min: *value_range.start(), max: *value_range.end() };
    Ok(inst)
}

/// Method 4 for explicit positives and strictly increasing cut points
/// `r_1 < ... < r_l = positives.len()` (prefix lengths).
pub fn method4_from_parts(positives: &[i64], cuts: &[usize]) -> Result<GeneratedInstance> {
    if positives.iter().any(|&v| v <= 0) {
        return Err(Error::InvalidConfig("method 4 values must be positive".into()));
    }
    if cuts.is_empty() || cuts.last() != Some(&positives.len()) || cuts[0] == 0 || cuts.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidConfig(format!(
            "cuts {cuts:?} must increase strictly from 1 up to {}",
            positives.len()
        )));
    }
    let mut values = positives.to_vec();
    let mut prev = 0;
    for &r in cuts {
        values.push(-positives[prev..r].iter().sum::<i64>());
        prev = r;
    }
    Ok(GeneratedInstance {
        d: DebtVector::new(values)?,
        claimed_optimum: cuts.len(),
        optimum_kind: OptimumKind::LowerBoundClaimedExact,
        method: 4,
        seed: 0,
        params: MethodParams::Base,
    })
}

/// Method 5: the base repeated `copies` times in total.
pub fn gen_method5(base: &GeneratedInstance, copies: usize) -> Result<GeneratedInstance> {
    if copies == 0 {
        return Err(Error::InvalidConfig("copies must be at least 1".into()));
    }
    if copies == 1 {
        return Ok(base.clone());
    }
    let values = base.d.values().repeat(copies);
    Ok(GeneratedInstance {
        d: DebtVector::new(values)?,
        claimed_optimum: base.claimed_optimum * copies,
        optimum_kind: OptimumKind::LowerBoundClaimedExact,
        method: 5,
        seed: base.seed,
        params: MethodParams::Copies { copies },
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Fraction of the `n!` orderings of a balanced two-group method-3 instance
/// (groups of `n/2`) that decode to the optimal partition: `2 (n/2)!^2 / n!`.
pub fn two_group_optimal_fraction(n: usize) -> f64 {
    (2f64.ln() + 2.0 * ln_factorial(n / 2) - ln_factorial(n)).exp()
}

/// Fraction of orderings of `{1..n/2, -1..-n/2}` that decode to the optimal
/// all-pairs partition: `(n/2)! 2^(n/2) / n!`.
pub fn pair_family_optimal_fraction(n: usize) -> f64 {
    (ln_factorial(n / 2) + (n / 2) as f64 * 2f64.ln() - ln_factorial(n)).exp()
}
