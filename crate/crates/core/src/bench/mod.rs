//! Prefix-masking benchmark.
//!
//! Every uppercase reference in the selected packages is masked to each
//! prefix length in the configured range, the engine is queried as if the
//! user had typed that prefix inside the referencing package, and the rank
//! of the original name within the top `k` is recorded.

mod compare;
pub mod emit;
pub mod metrics;
mod report;
pub mod synth;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{extract_benchmark_cases, BenchmarkCase, CaseFilter, PrefixRange, Repository};
use crate::engine::{build_index, make_pipeline, CompletionContext, Strategy, SymbolIndex};

pub use compare::{
    compare, AggregateDelta, DeltaLine, DeltaReport, PackageDelta, Partition, PartitionRule,
};
pub use metrics::{accuracy_at_k, mrr, ndcg_at_k, rank_histogram, MetricError, Ranked};
pub use report::{BenchReport, MetricRow, PrefixColumn, Scope};
pub use synth::{generate_raw, generate_synthetic_corpus, InvalidSpec, SyntheticSpec};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SCOPECOMPLETE_THREADS";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no benchmark cases qualify for the selected packages")]
    EmptyBenchmark,
    #[error("reports cannot be compared: {0}")]
    MismatchedReports(String),
    #[error("metric invariant violated for {scope} / {prefix}: {detail}")]
    MetricInvariant {
        scope: String,
        prefix: String,
        detail: String,
    },
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub k: usize,
    pub prefix_range: PrefixRange,
    pub case_sensitive: bool,
    pub filter: CaseFilter,
    /// Substring marking test packages in Test / Non-test partitions.
    pub test_marker: String,
    /// Worker threads; `None` uses every core (or `SCOPECOMPLETE_THREADS`).
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            k: 10,
            prefix_range: PrefixRange::default(),
            case_sensitive: true,
            filter: CaseFilter::All,
            test_marker: "Test".to_owned(),
            threads: None,
        }
    }
}

impl BenchConfig {
    fn thread_count(&self) -> Option<usize> {
        self.threads.or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
        })
    }
}

/// Result of one masked query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub case: BenchmarkCase,
    pub rank: Option<usize>,
    pub elapsed_ns: u64,
    /// Index entries drawn by the pipeline while answering.
    pub pulled: u64,
}

impl Ranked for Outcome {
    fn rank(&self) -> Option<usize> {
        self.rank
    }
}

fn evaluate_one(
    index: &SymbolIndex,
    case: &BenchmarkCase,
    strategy: Strategy,
    cfg: &BenchConfig,
) -> Outcome {
    let started = Instant::now();
    let ctx = CompletionContext {
        requesting_package: case.site.package_name.clone(),
        prefix: case.prefix.clone(),
        case_sensitive: cfg.case_sensitive,
    };
    let mut results = make_pipeline(&ctx, strategy, index).expect("case package is indexed");
    let rank = results.rank_of(&case.target_name, cfg.k);
    let pulled = results.pulled_total();
    Outcome {
        case: case.clone(),
        rank,
        elapsed_ns: started.elapsed().as_nanos() as u64,
        pulled,
    }
}

/// Runs every case through the engine; outcomes keep case order.
pub fn evaluate_cases(
    index: &SymbolIndex,
    cases: &[BenchmarkCase],
    strategy: Strategy,
    cfg: &BenchConfig,
) -> Result<Vec<Outcome>, BenchError> {
    let run = || {
        cases
            .par_iter()
            .map(|case| evaluate_one(index, case, strategy, cfg))
            .collect()
    };
    match cfg.thread_count() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(|pool| pool.install(run))
            .map_err(|err| BenchError::ThreadPool(err.to_string())),
        None => Ok(run()),
    }
}

/// Benchmarks one strategy over `repo`.
pub fn run_benchmark(
    repo: &Repository,
    strategy: Strategy,
    cfg: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    let started = Instant::now();
    let index = build_index(repo);
    let index_build_ns = started.elapsed().as_nanos() as u64;
    run_with_index(repo, &index, index_build_ns, strategy, cfg)
}

/// Like [`run_benchmark`] with a prebuilt index.
pub fn run_with_index(
    repo: &Repository,
    index: &SymbolIndex,
    index_build_ns: u64,
    strategy: Strategy,
    cfg: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    let cases = extract_benchmark_cases(repo, &cfg.filter, cfg.prefix_range);
    if cases.is_empty() {
        return Err(BenchError::EmptyBenchmark);
    }
    let outcomes = evaluate_cases(index, &cases, strategy, cfg)?;
    let report = BenchReport::aggregate(repo, strategy, cfg, &outcomes, index_build_ns);
    report.verify()?;
    Ok(report)
}

/// Peak resident set size of this process in KiB, where the platform
/// exposes it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|line| line.strip_prefix("VmHWM:"))
        .and_then(|rest| rest.trim().trim_end_matches("kB").trim().parse().ok())
}
