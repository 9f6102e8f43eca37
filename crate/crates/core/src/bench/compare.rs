use serde::{Deserialize, Serialize};

use super::report::{BenchReport, MetricRow, PrefixColumn, Scope};
use super::BenchError;
use crate::engine::Strategy;

/// How packages are split into test and non-test groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRule {
    pub test_marker: String,
}

impl PartitionRule {
    pub fn new(test_marker: impl Into<String>) -> Self {
        Self {
            test_marker: test_marker.into(),
        }
    }

    pub fn is_test(&self, package: &str) -> bool {
        package.contains(self.test_marker.as_str())
    }
}

impl Default for PartitionRule {
    fn default() -> Self {
        Self::new("Test")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Partition {
    Overall,
    Test,
    NonTest,
}

impl Partition {
    pub fn label(self) -> &'static str {
        match self {
            Partition::Overall => "Overall",
            Partition::Test => "Test",
            Partition::NonTest => "Non-test",
        }
    }
}

/// One metric across columns `[all, prefix lengths...]` for both conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaLine {
    pub without: Vec<f64>,
    pub with: Vec<f64>,
    /// `with - without`, cell by cell.
    pub delta: Vec<f64>,
}

impl DeltaLine {
    fn new(without: Vec<f64>, with: Vec<f64>) -> Self {
        let delta = with.iter().zip(&without).map(|(w, wo)| w - wo).collect();
        Self {
            without,
            with,
            delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackageDelta {
    pub package: String,
    pub is_test: bool,
    pub mrr: DeltaLine,
    pub accuracy: DeltaLine,
}

/// Mean over the packages of one partition. Packages whose overall MRR is
/// exactly zero in a report are left out of that report's mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateDelta {
    pub partition: Partition,
    pub packages: usize,
    pub included_without: usize,
    pub included_with: usize,
    pub mrr: DeltaLine,
    pub accuracy: DeltaLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub corpus: String,
    pub without: Strategy,
    pub with: Strategy,
    pub prefix_lengths: Vec<usize>,
    pub packages: Vec<PackageDelta>,
    pub aggregates: Vec<AggregateDelta>,
}

impl DeltaReport {
    pub fn aggregate(&self, partition: Partition) -> Option<&AggregateDelta> {
        self.aggregates.iter().find(|a| a.partition == partition)
    }

    /// Column labels: `MRR` (or the matrix metric pooled) then each length.
    pub fn columns(&self) -> Vec<PrefixColumn> {
        std::iter::once(PrefixColumn::All)
            .chain(self.prefix_lengths.iter().map(|&n| PrefixColumn::Length(n)))
            .collect()
    }
}

fn line(
    report: &BenchReport,
    scope: &Scope,
    columns: &[PrefixColumn],
    metric: fn(&MetricRow) -> f64,
) -> Vec<f64> {
    columns
        .iter()
        .map(|&c| report.row(scope, c).map_or(0.0, metric))
        .collect()
}

fn mean_columns(rows: &[&Vec<f64>], width: usize) -> Vec<f64> {
    if rows.is_empty() {
        return vec![0.0; width];
    }
    (0..width)
        .map(|i| rows.iter().map(|r| r[i]).sum::<f64>() / rows.len() as f64)
        .collect()
}

/// Pairs a baseline report with a treatment report on the same corpus and
/// configuration.
pub fn compare(
    without: &BenchReport,
    with: &BenchReport,
    rule: &PartitionRule,
) -> Result<DeltaReport, BenchError> {
    if without.corpus != with.corpus {
        return Err(BenchError::MismatchedReports(format!(
            "corpus `{}` vs `{}`",
            without.corpus, with.corpus
        )));
    }
    if without.config != with.config {
        return Err(BenchError::MismatchedReports(
            "benchmark configurations differ".into(),
        ));
    }
    let packages = without.packages();
    if packages != with.packages() {
        return Err(BenchError::MismatchedReports("package sets differ".into()));
    }

    let columns: Vec<PrefixColumn> = std::iter::once(PrefixColumn::All)
        .chain(
            without
                .prefix_lengths()
                .into_iter()
                .map(PrefixColumn::Length),
        )
        .collect();
    let by_mrr: fn(&MetricRow) -> f64 = |r| r.mrr;
    let by_accuracy: fn(&MetricRow) -> f64 = |r| r.accuracy;

    let package_deltas: Vec<PackageDelta> = packages
        .iter()
        .map(|name| {
            let scope = Scope::Package((*name).to_owned());
            PackageDelta {
                package: (*name).to_owned(),
                is_test: rule.is_test(name),
                mrr: DeltaLine::new(
                    line(without, &scope, &columns, by_mrr),
                    line(with, &scope, &columns, by_mrr),
                ),
                accuracy: DeltaLine::new(
                    line(without, &scope, &columns, by_accuracy),
                    line(with, &scope, &columns, by_accuracy),
                ),
            }
        })
        .collect();

    let mut aggregates = Vec::new();
    for partition in [Partition::Overall, Partition::Test, Partition::NonTest] {
        let members: Vec<&PackageDelta> = package_deltas
            .iter()
            .filter(|p| match partition {
                Partition::Overall => true,
                Partition::Test => p.is_test,
                Partition::NonTest => !p.is_test,
            })
            .collect();
        if members.is_empty() {
            continue;
        }
        // Column 0 is the pooled MRR, the exclusion criterion.
        let kept_without: Vec<&&PackageDelta> =
            members.iter().filter(|p| p.mrr.without[0] != 0.0).collect();
        let kept_with: Vec<&&PackageDelta> =
            members.iter().filter(|p| p.mrr.with[0] != 0.0).collect();
        let mean = |kept: &[&&PackageDelta], pick: fn(&PackageDelta) -> &Vec<f64>| {
            let rows: Vec<&Vec<f64>> = kept.iter().map(|p| pick(p)).collect();
            mean_columns(&rows, columns.len())
        };
        aggregates.push(AggregateDelta {
            partition,
            packages: members.len(),
            included_without: kept_without.len(),
            included_with: kept_with.len(),
            mrr: DeltaLine::new(
                mean(&kept_without, |p| &p.mrr.without),
                mean(&kept_with, |p| &p.mrr.with),
            ),
            accuracy: DeltaLine::new(
                mean(&kept_without, |p| &p.accuracy.without),
                mean(&kept_with, |p| &p.accuracy.with),
            ),
        });
    }

    Ok(DeltaReport {
        corpus: without.corpus.clone(),
        without: without.strategy,
        with: with.strategy,
        prefix_lengths: without.prefix_lengths(),
        packages: package_deltas,
        aggregates,
    })
}
