use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::metrics::{accuracy_at_k, mrr, ndcg_at_k, rank_histogram};
use super::{peak_rss_kib, BenchConfig, BenchError, Outcome};
use crate::corpus::Repository;
use crate::engine::Strategy;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "kebab-case")]
pub enum Scope {
    Framework(String),
    Package(String),
}

impl Scope {
    pub fn name(&self) -> &str {
        match self {
            Scope::Framework(name) | Scope::Package(name) => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scope::Framework(_) => "framework",
            Scope::Package(_) => "package",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind(), self.name())
    }
}

/// A single prefix length, or every length pooled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PrefixColumn {
    Length(usize),
    All,
}

impl fmt::Display for PrefixColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixColumn::Length(n) => write!(f, "{n}"),
            PrefixColumn::All => f.write_str("all"),
        }
    }
}

impl From<PrefixColumn> for String {
    fn from(column: PrefixColumn) -> Self {
        column.to_string()
    }
}

impl FromStr for PrefixColumn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(PrefixColumn::All)
        } else {
            s.parse()
                .map(PrefixColumn::Length)
                .map_err(|_| format!("invalid prefix column `{s}`"))
        }
    }
}

impl TryFrom<String> for PrefixColumn {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Metrics for one scope at one prefix length. Rates lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub scope: Scope,
    pub prefix: PrefixColumn,
    pub queries: u64,
    /// Queries whose answer appeared within the top k.
    pub ranked: u64,
    pub accuracy: f64,
    /// Hits per rank 1..=k.
    pub histogram: Vec<u64>,
    pub mrr: f64,
    pub ndcg: f64,
    /// Queries whose prefix was the whole name.
    pub full_name_cases: u64,
    pub pulled: u64,
    pub mean_elapsed_ns: u64,
    pub total_elapsed_ns: u64,
}

impl MetricRow {
    fn from_outcomes(scope: Scope, prefix: PrefixColumn, outcomes: &[&Outcome], k: usize) -> Self {
        let total_elapsed_ns: u64 = outcomes.iter().map(|o| o.elapsed_ns).sum();
        let queries = outcomes.len() as u64;
        let histogram = rank_histogram(outcomes, k);
        Self {
            scope,
            prefix,
            queries,
            ranked: histogram.iter().sum(),
            accuracy: accuracy_at_k(outcomes, k).unwrap_or(0.0),
            mrr: mrr(outcomes).unwrap_or(0.0),
            ndcg: ndcg_at_k(outcomes, k).unwrap_or(0.0),
            histogram,
            full_name_cases: outcomes.iter().filter(|o| o.case.is_full_name()).count() as u64,
            pulled: outcomes.iter().map(|o| o.pulled).sum(),
            mean_elapsed_ns: total_elapsed_ns.checked_div(queries).unwrap_or(0),
            total_elapsed_ns,
        }
    }

    /// Cross-checks that must hold for any set of outcomes.
    pub fn verify(&self) -> Result<(), BenchError> {
        let fail = |detail: String| BenchError::MetricInvariant {
            scope: self.scope.to_string(),
            prefix: self.prefix.to_string(),
            detail,
        };
        let hits: u64 = self.histogram.iter().sum();
        if hits != self.ranked {
            return Err(fail(format!(
                "histogram sums to {hits}, ranked is {}",
                self.ranked
            )));
        }
        let expected = if self.queries == 0 {
            0.0
        } else {
            hits as f64 / self.queries as f64
        };
        if self.accuracy != expected {
            return Err(fail(format!(
                "accuracy {} != {hits}/{}",
                self.accuracy, self.queries
            )));
        }
        if self.mrr > self.accuracy {
            return Err(fail(format!(
                "mrr {} exceeds accuracy {}",
                self.mrr, self.accuracy
            )));
        }
        if self.ndcg > self.accuracy {
            return Err(fail(format!(
                "ndcg {} exceeds accuracy {}",
                self.ndcg, self.accuracy
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub corpus: String,
    pub strategy: Strategy,
    pub config: BenchConfig,
    pub case_count: usize,
    pub index_build_ns: u64,
    /// Best effort; absent where the platform does not report it.
    pub peak_rss_kib: Option<u64>,
    /// Per package (selected packages in name order), then the framework.
    /// Within a scope: each prefix length, then `all`.
    pub rows: Vec<MetricRow>,
}

fn select<'a>(outcomes: &[&'a Outcome], column: PrefixColumn) -> Vec<&'a Outcome> {
    outcomes
        .iter()
        .copied()
        .filter(|o| match column {
            PrefixColumn::Length(n) => o.case.prefix_length == n,
            PrefixColumn::All => true,
        })
        .collect()
}

impl BenchReport {
    pub(crate) fn aggregate(
        repo: &Repository,
        strategy: Strategy,
        cfg: &BenchConfig,
        outcomes: &[Outcome],
        index_build_ns: u64,
    ) -> Self {
        let columns: Vec<PrefixColumn> = cfg
            .prefix_range
            .lengths()
            .map(PrefixColumn::Length)
            .chain([PrefixColumn::All])
            .collect();
        let mut rows = Vec::new();
        let mut push_scope = |scope: Scope, members: &[&Outcome]| {
            for &column in &columns {
                rows.push(MetricRow::from_outcomes(
                    scope.clone(),
                    column,
                    &select(members, column),
                    cfg.k,
                ));
            }
        };

        for package in repo.packages().iter().filter(|p| cfg.filter.selects(p)) {
            let members: Vec<&Outcome> = outcomes
                .iter()
                .filter(|o| o.case.site.package_name == package.name)
                .collect();
            push_scope(Scope::Package(package.name.clone()), &members);
        }
        let everything: Vec<&Outcome> = outcomes.iter().collect();
        push_scope(Scope::Framework(repo.name().to_owned()), &everything);

        Self {
            corpus: repo.name().to_owned(),
            strategy,
            config: cfg.clone(),
            case_count: outcomes.len(),
            index_build_ns,
            peak_rss_kib: peak_rss_kib(),
            rows,
        }
    }

    pub fn verify(&self) -> Result<(), BenchError> {
        self.rows.iter().try_for_each(MetricRow::verify)
    }

    pub fn row(&self, scope: &Scope, prefix: PrefixColumn) -> Option<&MetricRow> {
        self.rows
            .iter()
            .find(|r| &r.scope == scope && r.prefix == prefix)
    }

    pub fn framework_row(&self, prefix: PrefixColumn) -> Option<&MetricRow> {
        self.rows
            .iter()
            .find(|r| matches!(r.scope, Scope::Framework(_)) && r.prefix == prefix)
    }

    /// MRR over every query of the run.
    pub fn overall_mrr(&self) -> f64 {
        self.framework_row(PrefixColumn::All).map_or(0.0, |r| r.mrr)
    }

    /// Package names with rows, in report order.
    pub fn packages(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter_map(|r| match (&r.scope, r.prefix) {
                (Scope::Package(name), PrefixColumn::All) => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn prefix_lengths(&self) -> Vec<usize> {
        self.config.prefix_range.lengths().collect()
    }
}
