use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use scopecomplete::bench::emit::{
    delta_csv, delta_table, report_table, reports_csv, stats_csv, stats_table, to_json,
};
use scopecomplete::bench::{
    compare, generate_raw, run_benchmark, BenchConfig, BenchError, BenchReport, DeltaReport,
    InvalidSpec, PartitionRule, SyntheticSpec,
};
use scopecomplete::corpus::format::write_dir;
use scopecomplete::corpus::{
    corpus_stats, load_corpus, CaseFilter, CorpusError, CorpusOptions, PrefixRange, Repository,
};
use scopecomplete::engine::{build_index, make_pipeline, CompletionContext, EngineError, Strategy};
use serde::Serialize;
use thiserror::Error;

/// Longest prefix length the benchmark accepts.
const MAX_PREFIX: usize = 32;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Spec(#[from] InvalidSpec),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("cannot read report {path}: {message}")]
    Report { path: PathBuf, message: String },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 0 success, 2 bad input, 3 nothing to benchmark.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Bench(BenchError::EmptyBenchmark) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyChoice {
    One(Strategy),
    Both,
}

impl StrategyChoice {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyChoice::One(s) => vec![s],
            StrategyChoice::Both => vec![Strategy::FlatGlobal, Strategy::PackageAware],
        }
    }
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(StrategyChoice::Both),
            other => other.parse().map(StrategyChoice::One),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Table => "txt",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub corpus_path: Option<PathBuf>,
    pub strategy: StrategyChoice,
    pub k: usize,
    pub prefix_range: PrefixRange,
    pub case_sensitive: bool,
    pub test_marker: String,
    pub filter: String,
    pub output_format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub separator: char,
    pub threads: Option<usize>,
}

impl CliConfig {
    pub fn validated(self) -> Result<Self, CliError> {
        if self.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        let PrefixRange { min, max } = self.prefix_range;
        if min == 0 || min > max || max > MAX_PREFIX {
            return Err(CliError::Usage(format!(
                "--prefix-range must be a non-empty range within 1..{MAX_PREFIX}, got {}",
                self.prefix_range
            )));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(self)
    }

    fn corpus(&self) -> Result<&Path, CliError> {
        self.corpus_path
            .as_deref()
            .ok_or_else(|| CliError::Usage("--corpus is required".into()))
    }

    fn load(&self) -> Result<Repository, CliError> {
        let options = CorpusOptions {
            separator: self.separator,
        };
        Ok(load_corpus(self.corpus()?, &options)?)
    }

    fn case_filter(&self) -> CaseFilter {
        let marker = self.test_marker.clone();
        match self.filter.as_str() {
            "all" => CaseFilter::All,
            "tests" => CaseFilter::Tests { marker },
            "non-tests" => CaseFilter::NonTests { marker },
            list => CaseFilter::Named {
                packages: list
                    .split(',')
                    .map(|p| p.trim().to_owned())
                    .filter(|p| !p.is_empty())
                    .collect(),
            },
        }
    }

    fn bench_config(&self) -> BenchConfig {
        BenchConfig {
            k: self.k,
            prefix_range: self.prefix_range,
            case_sensitive: self.case_sensitive,
            filter: self.case_filter(),
            test_marker: self.test_marker.clone(),
            threads: self.threads,
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let wrap = |source| CliError::Write {
                path: path.to_owned(),
                source,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(wrap)?;
            }
            fs::write(path, text).map_err(wrap)
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

pub fn cmd_stats(config: &CliConfig) -> Result<(), CliError> {
    let repo = config.load()?;
    let stats = corpus_stats(&repo);
    let text = match config.output_format {
        OutputFormat::Csv => stats_csv(repo.name(), &stats),
        OutputFormat::Json => to_json(&stats),
        OutputFormat::Table => stats_table(repo.name(), &stats),
    };
    emit(config.out.as_deref(), &with_newline(text))
}

#[derive(Serialize)]
struct Suggestion<'a> {
    rank: usize,
    name: &'a str,
    tier: &'static str,
    origin_package: &'a str,
}

pub fn cmd_complete(config: &CliConfig, package: &str, prefix: &str) -> Result<(), CliError> {
    let strategy = match config.strategy {
        StrategyChoice::One(s) => s,
        StrategyChoice::Both => {
            return Err(CliError::Usage("`complete` takes a single strategy".into()))
        }
    };
    let repo = config.load()?;
    let index = build_index(&repo);
    let ctx = CompletionContext::new(package, prefix).case_sensitive(config.case_sensitive);
    let mut results = make_pipeline(&ctx, strategy, &index)?;
    let rows: Vec<Suggestion> = results
        .top(config.k)
        .iter()
        .enumerate()
        .map(|(i, c)| Suggestion {
            rank: i + 1,
            name: &c.name,
            tier: c.tier.as_str(),
            origin_package: &c.origin_package,
        })
        .collect();
    let text = match config.output_format {
        OutputFormat::Json => with_newline(to_json(&rows)),
        OutputFormat::Csv => {
            let mut text = String::from("rank,name,tier,origin_package\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    r.rank, r.name, r.tier, r.origin_package
                ));
            }
            text
        }
        OutputFormat::Table => {
            let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
            let mut text = format!(
                "{:>4}  {:<name_w$}  {:<15}  origin\n",
                "rank", "name", "tier"
            );
            for r in &rows {
                text.push_str(&format!(
                    "{:>4}  {:<name_w$}  {:<15}  {}\n",
                    r.rank, r.name, r.tier, r.origin_package
                ));
            }
            text
        }
    };
    emit(config.out.as_deref(), &text)
}

#[derive(Serialize)]
struct Combined<'a> {
    reports: &'a [BenchReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<&'a DeltaReport>,
}

fn delta_path(out: &Path, format: OutputFormat) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.delta.{}", format.extension()))
}

fn render_delta(delta: &DeltaReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => delta_csv(delta),
        OutputFormat::Json => to_json(delta),
        OutputFormat::Table => delta_table(delta),
    }
}

pub fn cmd_bench(config: &CliConfig) -> Result<(), CliError> {
    let repo = config.load()?;
    let bench = config.bench_config();
    let reports = config
        .strategy
        .strategies()
        .into_iter()
        .map(|s| run_benchmark(&repo, s, &bench))
        .collect::<Result<Vec<_>, _>>()?;
    let delta = match reports.as_slice() {
        [without, with] => Some(compare(
            without,
            with,
            &PartitionRule::new(config.test_marker.as_str()),
        )?),
        _ => None,
    };

    let format = config.output_format;
    if format == OutputFormat::Json {
        let text = to_json(&Combined {
            reports: &reports,
            delta: delta.as_ref(),
        });
        return emit(config.out.as_deref(), &with_newline(text));
    }
    let body = match format {
        OutputFormat::Csv => reports_csv(&reports.iter().collect::<Vec<_>>()),
        _ => reports
            .iter()
            .map(report_table)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    match (&delta, config.out.as_deref()) {
        (Some(delta), Some(out)) => {
            emit(Some(out), &with_newline(body))?;
            emit(
                Some(&delta_path(out, format)),
                &with_newline(render_delta(delta, format)),
            )
        }
        (Some(delta), None) => {
            let text = format!(
                "{}\n{}",
                with_newline(body),
                with_newline(render_delta(delta, format))
            );
            emit(None, &text)
        }
        (None, out) => emit(out, &with_newline(body)),
    }
}

pub fn cmd_synth(config: &CliConfig, spec: &SyntheticSpec) -> Result<(), CliError> {
    let root = config
        .corpus_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("--corpus (output directory) is required".into()))?;
    let raw = generate_raw(spec, config.seed)?;
    write_dir(&raw, root)?;
    eprintln!(
        "wrote {} packages ({} symbols each) to {}",
        spec.packages,
        spec.symbols_per_package,
        root.display()
    );
    Ok(())
}

fn read_report(path: &Path) -> Result<BenchReport, CliError> {
    let fail = |message: String| CliError::Report {
        path: path.to_owned(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| fail(e.to_string()))
}

pub fn cmd_compare(config: &CliConfig, without: &Path, with: &Path) -> Result<(), CliError> {
    let delta = compare(
        &read_report(without)?,
        &read_report(with)?,
        &PartitionRule::new(config.test_marker.as_str()),
    )?;
    emit(
        config.out.as_deref(),
        &with_newline(render_delta(&delta, config.output_format)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> CliConfig {
        CliConfig {
            corpus_path: None,
            strategy: StrategyChoice::Both,
            k: 10,
            prefix_range: PrefixRange::default(),
            case_sensitive: true,
            test_marker: "Test".into(),
            filter: "all".into(),
            output_format: OutputFormat::Csv,
            out: None,
            seed: 0,
            separator: '-',
            threads: None,
        }
    }

    #[test]
    fn validation_bounds() {
        assert!(config().validated().is_ok());
        assert!(CliConfig { k: 0, ..config() }.validated().is_err());
        for (min, max) in [(0, 4), (5, 4), (2, 33)] {
            let bad = CliConfig {
                prefix_range: PrefixRange::new(min, max),
                ..config()
            };
            assert_eq!(bad.validated().unwrap_err().exit_code(), 2);
        }
        assert!(CliConfig {
            prefix_range: PrefixRange::new(1, 32),
            ..config()
        }
        .validated()
        .is_ok());
    }

    #[test]
    fn filters_and_strategies() {
        assert_eq!(config().case_filter(), CaseFilter::All);
        let named = CliConfig {
            filter: "A-Core, B-Tests".into(),
            ..config()
        };
        assert_eq!(
            named.case_filter(),
            CaseFilter::Named {
                packages: vec!["A-Core".into(), "B-Tests".into()]
            }
        );
        assert_eq!("both".parse(), Ok(StrategyChoice::Both));
        assert_eq!(
            "flat-global".parse(),
            Ok(StrategyChoice::One(Strategy::FlatGlobal))
        );
        assert!("alphabetical".parse::<StrategyChoice>().is_err());
    }

    #[test]
    fn delta_file_sits_next_to_report() {
        assert_eq!(
            delta_path(Path::new("out/run.csv"), OutputFormat::Csv),
            PathBuf::from("out/run.delta.csv")
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Bench(BenchError::EmptyBenchmark).exit_code(), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Corpus(CorpusError::EmptyCorpus).exit_code(), 2);
    }
}
