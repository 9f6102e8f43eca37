//! CSV, JSON and plain-text renderings of reports.
//!
//! CSV rates are raw values in `[0, 1]` with four decimals. Text tables show
//! rates multiplied by 100 with two decimals, MRR first and then one column
//! per prefix length.

use std::fmt::Write as _;

use serde::Serialize;

use super::compare::{DeltaLine, DeltaReport};
use super::report::{BenchReport, MetricRow, PrefixColumn, Scope};
use crate::corpus::CorpusStats;

/// CSV columns carrying wall-clock measurements; everything else is
/// deterministic for a given corpus and configuration.
pub const TIMING_COLUMNS: [&str; 2] = ["mean_elapsed_ns", "total_elapsed_ns"];

fn fixed(value: f64) -> String {
    format!("{value:.4}")
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    build(&mut writer).expect("writing CSV to memory");
    let bytes = writer.into_inner().expect("flushing CSV to memory");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

pub fn report_csv_header(k: usize) -> Vec<String> {
    let mut header: Vec<String> = [
        "strategy",
        "scope_kind",
        "scope",
        "prefix_length",
        "queries",
        "ranked",
        "accuracy_at_k",
        "mrr",
        "ndcg_at_k",
        "full_name_cases",
    ]
    .iter()
    .map(|s| (*s).to_owned())
    .collect();
    header.extend((1..=k).map(|r| format!("rank_{r}")));
    header.push("pulled".to_owned());
    header.extend(TIMING_COLUMNS.iter().map(|s| (*s).to_owned()));
    header
}

fn row_record(report: &BenchReport, row: &MetricRow) -> Vec<String> {
    let mut record = vec![
        report.strategy.to_string(),
        row.scope.kind().to_owned(),
        row.scope.name().to_owned(),
        row.prefix.to_string(),
        row.queries.to_string(),
        row.ranked.to_string(),
        fixed(row.accuracy),
        fixed(row.mrr),
        fixed(row.ndcg),
        row.full_name_cases.to_string(),
    ];
    record.extend(row.histogram.iter().map(u64::to_string));
    record.push(row.pulled.to_string());
    record.push(row.mean_elapsed_ns.to_string());
    record.push(row.total_elapsed_ns.to_string());
    record
}

/// One CSV row per strategy, scope and prefix column. Reports are expected
/// to share `k`.
pub fn reports_csv(reports: &[&BenchReport]) -> String {
    let k = reports.first().map_or(10, |r| r.config.k);
    csv_string(|w| {
        w.write_record(report_csv_header(k))?;
        for report in reports {
            for row in &report.rows {
                w.write_record(row_record(report, row))?;
            }
        }
        Ok(())
    })
}

/// Drops the timing columns from CSV produced by [`reports_csv`].
pub fn strip_timing_columns(csv_text: &str) -> String {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header = reader.headers().expect("CSV header").clone();
    let keep: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| !TIMING_COLUMNS.contains(h))
        .map(|(i, _)| i)
        .collect();
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .expect("CSV rows");
    csv_string(|w| {
        w.write_record(keep.iter().map(|&i| &header[i]))?;
        for record in &records {
            w.write_record(keep.iter().map(|&i| &record[i]))?;
        }
        Ok(())
    })
}

pub fn delta_csv(delta: &DeltaReport) -> String {
    let columns = delta.columns();
    csv_string(|w| {
        let mut header = vec![
            "matrix".to_owned(),
            "scope_kind".to_owned(),
            "scope".to_owned(),
            "condition".to_owned(),
        ];
        header.extend(columns.iter().map(PrefixColumn::to_string));
        w.write_record(&header)?;
        let mut emit =
            |matrix: &str, kind: &str, scope: &str, line: &DeltaLine| -> csv::Result<()> {
                for (condition, values) in [
                    ("without", &line.without),
                    ("with", &line.with),
                    ("delta", &line.delta),
                ] {
                    let mut record = vec![
                        matrix.to_owned(),
                        kind.to_owned(),
                        scope.to_owned(),
                        condition.to_owned(),
                    ];
                    record.extend(values.iter().copied().map(fixed));
                    w.write_record(&record)?;
                }
                Ok(())
            };
        for (matrix, pick) in matrices() {
            for agg in &delta.aggregates {
                emit(
                    matrix,
                    "partition",
                    agg.partition.label(),
                    pick.aggregate(agg),
                )?;
            }
            for package in &delta.packages {
                emit(matrix, "package", &package.package, pick.package(package))?;
            }
        }
        Ok(())
    })
}

#[derive(Clone, Copy)]
enum Matrix {
    Mrr,
    Accuracy,
}

impl Matrix {
    fn aggregate(self, agg: &super::AggregateDelta) -> &DeltaLine {
        match self {
            Matrix::Mrr => &agg.mrr,
            Matrix::Accuracy => &agg.accuracy,
        }
    }

    fn package(self, p: &super::PackageDelta) -> &DeltaLine {
        match self {
            Matrix::Mrr => &p.mrr,
            Matrix::Accuracy => &p.accuracy,
        }
    }

    fn lead(self) -> &'static str {
        match self {
            Matrix::Mrr => "MRR",
            Matrix::Accuracy => "Acc",
        }
    }
}

fn matrices() -> [(&'static str, Matrix); 2] {
    [("mrr", Matrix::Mrr), ("accuracy", Matrix::Accuracy)]
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn percent(value: f64) -> String {
    format!("{:.2}", value * 100.0)
}

/// Left-aligns the first `text_columns` columns and right-aligns the rest.
fn render(rows: &[Vec<String>], text_columns: usize) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            if c < text_columns {
                let _ = write!(line, "{cell:<w$}", w = widths[c]);
            } else {
                let _ = write!(line, "{cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Per-scope MRR and accuracy matrices for one strategy.
pub fn report_table(report: &BenchReport) -> String {
    let lengths = report.prefix_lengths();
    let mut out = format!(
        "{} / {} (k = {}, {} queries)\n",
        report.corpus, report.strategy, report.config.k, report.case_count
    );
    let mut scopes: Vec<&Scope> = Vec::new();
    for row in &report.rows {
        if !scopes.contains(&&row.scope) {
            scopes.push(&row.scope);
        }
    }
    for (title, lead, metric) in [
        (
            "MRR per prefix length (x100)",
            "MRR",
            (|r: &MetricRow| r.mrr) as fn(&MetricRow) -> f64,
        ),
        (
            "Accuracy@k per prefix length (x100)",
            "Acc",
            |r: &MetricRow| r.accuracy,
        ),
    ] {
        let mut rows = vec![{
            let mut h = vec!["Scope".to_owned(), lead.to_owned()];
            h.extend(lengths.iter().map(usize::to_string));
            h
        }];
        for scope in &scopes {
            let value = |c: PrefixColumn| report.row(scope, c).map_or(0.0, metric);
            let mut line = vec![scope.name().to_owned(), percent(value(PrefixColumn::All))];
            line.extend(
                lengths
                    .iter()
                    .map(|&n| percent(value(PrefixColumn::Length(n)))),
            );
            rows.push(line);
        }
        let _ = writeln!(out, "\n{title}");
        out.push_str(&render(&rows, 1));
    }
    out
}

/// Without / With / delta table, laid out like a framework comparison table.
pub fn delta_table(delta: &DeltaReport) -> String {
    let mut out = format!(
        "{}: without = {}, with = {}; packages with zero MRR omitted from means\n",
        delta.corpus, delta.without, delta.with
    );
    for (name, matrix) in matrices() {
        let mut rows = vec![{
            let mut h = vec![
                "Framework".to_owned(),
                "Package Type".to_owned(),
                "Metric".to_owned(),
                matrix.lead().to_owned(),
            ];
            h.extend(delta.prefix_lengths.iter().map(usize::to_string));
            h
        }];
        let mut push = |scope: &str, kind: &str, line: &DeltaLine| {
            for (i, (label, values)) in [
                ("Without", &line.without),
                ("With", &line.with),
                ("Delta", &line.delta),
            ]
            .into_iter()
            .enumerate()
            {
                let mut row = if i == 0 {
                    vec![scope.to_owned(), kind.to_owned()]
                } else {
                    vec![String::new(), String::new()]
                };
                row.push(label.to_owned());
                row.extend(values.iter().map(|v| percent(*v)));
                rows.push(row);
            }
        };
        for agg in &delta.aggregates {
            push(&delta.corpus, agg.partition.label(), matrix.aggregate(agg));
        }
        for package in &delta.packages {
            push(
                &package.package,
                if package.is_test { "Test" } else { "Non-test" },
                matrix.package(package),
            );
        }
        let _ = writeln!(
            out,
            "\n{} matrix (x100)",
            if name == "mrr" { "MRR" } else { "Accuracy@k" }
        );
        out.push_str(&render(&rows, 3));
    }
    out
}

const STATS_HEADER: [&str; 10] = [
    "Framework",
    "# Packages",
    "# Classes",
    "# Defined Classes",
    "# Methods",
    "rho_int",
    "R_int",
    "R_ext",
    "rho_int (mean)",
    "R_unresolved",
];

fn stats_record(name: &str, s: &CorpusStats) -> Vec<String> {
    vec![
        name.to_owned(),
        s.package_count.to_string(),
        s.class_count.to_string(),
        s.defined_class_count.to_string(),
        s.method_count.to_string(),
        format!("{:.2}", s.rho_int_global),
        s.r_int.to_string(),
        s.r_ext.to_string(),
        format!("{:.2}", s.rho_int_mean),
        s.r_unresolved.to_string(),
    ]
}

/// Corpus overview: the first eight columns follow the usual framework
/// overview layout, with `rho_int` as the global ratio.
pub fn stats_table(name: &str, stats: &CorpusStats) -> String {
    let header: Vec<String> = STATS_HEADER.iter().map(|s| (*s).to_owned()).collect();
    render(&[header, stats_record(name, stats)], 1)
}

pub fn stats_csv(name: &str, stats: &CorpusStats) -> String {
    csv_string(|w| {
        w.write_record([
            "framework",
            "packages",
            "classes",
            "defined_classes",
            "methods",
            "rho_int_global",
            "r_int",
            "r_ext",
            "rho_int_mean",
            "r_unresolved",
        ])?;
        let record = vec![
            name.to_owned(),
            stats.package_count.to_string(),
            stats.class_count.to_string(),
            stats.defined_class_count.to_string(),
            stats.method_count.to_string(),
            fixed(stats.rho_int_global),
            stats.r_int.to_string(),
            stats.r_ext.to_string(),
            fixed(stats.rho_int_mean),
            stats.r_unresolved.to_string(),
        ];
        w.write_record(&record)
    })
}
