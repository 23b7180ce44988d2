//! Analysis reports: one deterministic sectioned document per run, with
//! every table also exposed in row form for CSV export. All floating-point
//! output is printed with six significant digits, so rendering the same
//! data twice is byte-identical.

use chrono::{DateTime, Utc};

use crate::ast::record::LogRecord;
use crate::ast::{parse_source, NodeKind, SourceSyntax};
use crate::ingest::RepoMetadata;
use crate::semantics::{detect_label, profile_arguments};
use crate::stats::{
    argument_count_distribution, block_distribution, cumulative_activity_curve, flag_intersections,
    function_type_distribution, literal_share, monthly_async_series, summary_stats,
    top_record_names, ActivityPoint, Distribution, IntersectionTable, LiteralShare,
    MonthlyAsyncPoint, NameKey, StatsError, SummaryStats,
};

/// Ranked-name sections cut off here.
pub const TOP_NAME_COUNT: usize = 10;

/// One report section in row form: `name` doubles as the CSV file stem.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub name: &'static str,
    pub title: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything the corpus analysis computes from a set of extracted records.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    pub total_records: u64,
    pub blocks: Distribution,
    pub function_types: Distribution,
    pub flags: IntersectionTable,
    pub argument_counts: Distribution,
    pub literals: LiteralShare,
    pub labels: LabelStats,
    pub top_function_names: Vec<(String, u64)>,
    pub top_callback_callees: Vec<(String, u64)>,
    pub top_literals: Vec<(String, u64)>,
    /// Over records inside functions; None when no record has one.
    pub complexity: Option<SummaryStats>,
    /// Empty when no record carries a parseable event time.
    pub monthly_async: Vec<MonthlyAsyncPoint>,
}

/// Label usage among two-argument logs. Each count narrows the previous
/// one: text literals are counted among two-argument records, labeling
/// among records with a text literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelStats {
    pub two_argument_records: u64,
    pub with_text_literal: u64,
    pub labeled: u64,
}

impl CorpusReport {
    pub fn build(records: &[LogRecord]) -> CorpusReport {
        let complexities: Vec<f64> = records
            .iter()
            .filter_map(|r| r.complexity_of_function.as_ref())
            .map(|c| c.complexity as f64)
            .collect();
        CorpusReport {
            total_records: records.len() as u64,
            blocks: block_distribution(records),
            function_types: function_type_distribution(records),
            flags: flag_intersections(records),
            argument_counts: argument_count_distribution(records),
            literals: literal_share(records),
            labels: label_stats(records),
            top_function_names: top_record_names(records, NameKey::FunctionName, TOP_NAME_COUNT),
            top_callback_callees: top_record_names(
                records,
                NameKey::CallbackCalleeName,
                TOP_NAME_COUNT,
            ),
            top_literals: top_record_names(records, NameKey::NormalizedLiteral, TOP_NAME_COUNT),
            complexity: summary_stats(&complexities).ok(),
            monthly_async: monthly_async_series(records),
        }
    }

    pub fn tables(&self) -> Vec<ReportTable> {
        let mut tables = vec![
            distribution_table("blocks", "log placement by block", "block", &self.blocks),
            distribution_table(
                "function_types",
                "enclosing function kinds",
                "function type",
                &self.function_types,
            ),
            self.flag_table(),
            distribution_table(
                "argument_counts",
                "argument counts",
                "arguments",
                &self.argument_counts,
            ),
            self.literal_table(),
            self.label_table(),
            name_table(
                "top_function_names",
                "most frequent function names",
                "name",
                &self.top_function_names,
            ),
            name_table(
                "top_callback_callees",
                "most frequent callback callees",
                "callee",
                &self.top_callback_callees,
            ),
            name_table(
                "top_literals",
                "most frequent literal arguments",
                "literal",
                &self.top_literals,
            ),
            complexity_table(self.complexity.as_ref()),
        ];
        tables.push(monthly_table(&self.monthly_async));
        tables
    }

    /// The full report document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("ad-hoc log corpus report\n");
        out.push_str(&format!("records: {}\n", self.total_records));
        for table in self.tables() {
            out.push('\n');
            render_table(&mut out, &table);
        }
        out
    }

    fn flag_table(&self) -> ReportTable {
        let rows = (0..8)
            .map(|i| {
                vec![
                    IntersectionTable::label(i).to_string(),
                    self.flags.cells[i].to_string(),
                    format_float(share(self.flags.cells[i], self.flags.total)),
                ]
            })
            .collect();
        ReportTable {
            name: "flag_intersections",
            title: "function flag intersections",
            header: vec!["flags", "count", "share"],
            rows,
        }
    }

    fn literal_table(&self) -> ReportTable {
        let rows = vec![
            vec![
                "with a string or template argument".to_string(),
                self.literals.with_text_literal.to_string(),
                format_float(share(self.literals.with_text_literal, self.literals.total)),
            ],
            vec![
                "with any literal argument".to_string(),
                self.literals.with_any_literal.to_string(),
                format_float(share(self.literals.with_any_literal, self.literals.total)),
            ],
        ];
        ReportTable {
            name: "literal_arguments",
            title: "literal arguments",
            header: vec!["measure", "count", "share of records"],
            rows,
        }
    }

    fn label_table(&self) -> ReportTable {
        let l = &self.labels;
        let rows = vec![
            vec![
                "two-argument records".to_string(),
                l.two_argument_records.to_string(),
                format_float(share(l.two_argument_records, self.total_records)),
            ],
            vec![
                "with a string or template argument".to_string(),
                l.with_text_literal.to_string(),
                format_float(share(l.with_text_literal, l.two_argument_records)),
            ],
            vec![
                "argument named by the literal".to_string(),
                l.labeled.to_string(),
                format_float(share(l.labeled, l.with_text_literal)),
            ],
        ];
        ReportTable {
            name: "labels",
            title: "labels in two-argument logs",
            header: vec!["measure", "count", "share of the line above"],
            rows,
        }
    }
}

fn label_stats(records: &[LogRecord]) -> LabelStats {
    let mut stats = LabelStats::default();
    for record in records {
        if record.arguments.len() != 2 {
            continue;
        }
        stats.two_argument_records += 1;
        if !record.arguments.iter().any(crate::stats::is_text_argument) {
            continue;
        }
        stats.with_text_literal += 1;
        if record_has_label(record) {
            stats.labeled += 1;
        }
    }
    stats
}

/// Re-parses the recorded call text and runs label detection on it. A call
/// that no longer parses in isolation cannot be inspected and counts as
/// unlabeled.
fn record_has_label(record: &LogRecord) -> bool {
    let stmt = format!("{};", record.log_in_string);
    let tree = match parse_source(&stmt, SourceSyntax::Js { jsx: true })
        .or_else(|_| parse_source(&stmt, SourceSyntax::Ts { tsx: false }))
    {
        Ok(tree) => tree,
        Err(_) => return false,
    };
    let Some(call) = tree
        .preorder()
        .find(|&id| tree.node(id).kind == NodeKind::CallExpression)
    else {
        return false;
    };
    detect_label(&profile_arguments(&tree, call)).unwrap_or(false)
}

/// Function census over a source corpus, with file-level parse outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BaselineReport {
    pub files_parsed: u64,
    pub files_skipped: u64,
    pub counts: crate::stats::BaselineCounts,
}

impl BaselineReport {
    pub fn table(&self) -> ReportTable {
        let c = &self.counts;
        let row = |label: &str, count: u64| {
            vec![
                label.to_string(),
                count.to_string(),
                format_float(share(count, c.total)),
            ]
        };
        ReportTable {
            name: "baseline",
            title: "function census",
            header: vec!["kind", "count", "share of functions"],
            rows: vec![
                row("functions", c.total),
                row("async", c.async_count),
                row("anonymous", c.anonymous_count),
                row("callback", c.callback_count),
                row("none of the three", c.others),
            ],
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("baseline function census\n");
        out.push_str(&format!("files parsed: {}\n", self.files_parsed));
        out.push_str(&format!("files skipped: {}\n", self.files_skipped));
        out.push('\n');
        render_table(&mut out, &self.table());
        out
    }
}

/// Summary of one repository-metadata sample: Table-style metric
/// statistics, activity share, and the cumulative update-recency curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RepoReport {
    pub total: u64,
    pub active: u64,
    pub metrics: Vec<(&'static str, SummaryStats)>,
    pub activity: Vec<ActivityPoint>,
}

impl RepoReport {
    /// `query_date` anchors the recency curve; it must not precede any
    /// repository's last update.
    pub fn build(repos: &[RepoMetadata], query_date: DateTime<Utc>) -> Result<RepoReport, StatsError> {
        if repos.is_empty() {
            return Ok(RepoReport {
                total: 0,
                active: 0,
                metrics: Vec::new(),
                activity: Vec::new(),
            });
        }
        let metric = |f: fn(&RepoMetadata) -> u64| -> Vec<f64> {
            repos.iter().map(|r| f(r) as f64).collect()
        };
        let metrics = vec![
            ("contributors", summary_stats(&metric(|r| r.contributors))?),
            ("stars", summary_stats(&metric(|r| r.stars))?),
            ("forks", summary_stats(&metric(|r| r.forks_count))?),
            ("watchers", summary_stats(&metric(|r| r.watchers_count))?),
            ("size (KB)", summary_stats(&metric(|r| r.size))?),
        ];
        let updated: Vec<DateTime<Utc>> = repos.iter().map(|r| r.last_updated).collect();
        Ok(RepoReport {
            total: repos.len() as u64,
            active: repos.iter().filter(|r| r.is_active).count() as u64,
            metrics,
            activity: cumulative_activity_curve(&updated, query_date)?,
        })
    }

    pub fn tables(&self) -> Vec<ReportTable> {
        let metric_rows = self
            .metrics
            .iter()
            .map(|(name, s)| {
                vec![
                    name.to_string(),
                    format_float(s.mean),
                    format_float(s.std_dev),
                    format_float(s.min),
                    format_float(s.median),
                    format_float(s.max),
                ]
            })
            .collect();
        let activity_rows = self
            .activity
            .iter()
            .map(|p| {
                vec![
                    p.months_since_update.to_string(),
                    format_float(p.cumulative_fraction),
                ]
            })
            .collect();
        vec![
            ReportTable {
                name: "repo_metrics",
                title: "repository metric summary",
                header: vec!["metric", "mean", "std dev", "min", "median", "max"],
                rows: metric_rows,
            },
            ReportTable {
                name: "activity_curve",
                title: "cumulative share by months since last update",
                header: vec!["months since update", "cumulative share"],
                rows: activity_rows,
            },
        ]
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("repository sample report\n");
        out.push_str(&format!("repositories: {}\n", self.total));
        out.push_str(&format!(
            "active in the last six months: {} ({})\n",
            self.active,
            format_float(share(self.active, self.total))
        ));
        for table in self.tables() {
            out.push('\n');
            render_table(&mut out, &table);
        }
        out
    }
}

fn distribution_table(
    name: &'static str,
    title: &'static str,
    label_header: &'static str,
    dist: &Distribution,
) -> ReportTable {
    let rows = dist
        .entries
        .iter()
        .map(|e| {
            vec![
                e.label.clone(),
                e.count.to_string(),
                format_float(e.fraction),
            ]
        })
        .collect();
    ReportTable {
        name,
        title,
        header: vec![label_header, "count", "share"],
        rows,
    }
}

fn name_table(
    name: &'static str,
    title: &'static str,
    label_header: &'static str,
    ranked: &[(String, u64)],
) -> ReportTable {
    ReportTable {
        name,
        title,
        header: vec![label_header, "count"],
        rows: ranked
            .iter()
            .map(|(n, c)| vec![n.clone(), c.to_string()])
            .collect(),
    }
}

fn complexity_table(stats: Option<&SummaryStats>) -> ReportTable {
    let rows = stats
        .map(|s| {
            vec![vec![
                format_float(s.mean),
                format_float(s.std_dev),
                format_float(s.min),
                format_float(s.median),
                format_float(s.max),
            ]]
        })
        .unwrap_or_default();
    ReportTable {
        name: "complexity",
        title: "cyclomatic complexity of logging functions",
        header: vec!["mean", "std dev", "min", "median", "max"],
        rows,
    }
}

fn monthly_table(series: &[MonthlyAsyncPoint]) -> ReportTable {
    ReportTable {
        name: "monthly_async",
        title: "async share by month",
        header: vec!["month", "records", "async", "percent"],
        rows: series
            .iter()
            .map(|p| {
                vec![
                    p.month.clone(),
                    p.total.to_string(),
                    p.async_count.to_string(),
                    format_float(p.percentage),
                ]
            })
            .collect(),
    }
}

/// Renders one section: title, header row, data rows. Columns are padded
/// to their widest cell; empty tables state that there is nothing to show.
fn render_table(out: &mut String, table: &ReportTable) {
    out.push_str(table.title);
    out.push('\n');
    if table.rows.is_empty() {
        out.push_str("(no data)\n");
        return;
    }
    let columns = table.header.len();
    let mut widths: Vec<usize> = table.header.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut emit = |cells: &[&str]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < columns {
                for _ in 0..widths[i].saturating_sub(cell.chars().count()) {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    };
    emit(&table.header);
    for row in &table.rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        emit(&cells);
    }
}

fn share(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Fixed-precision rendering with six significant digits. Values outside
/// the positional range fall back to scientific notation.
pub fn format_float(value: f64) -> String {
    if value == 0.0 {
        return "0.00000".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    if !(-4..6).contains(&exponent) {
        return format!("{:.5e}", value);
    }
    let decimals = (5 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}
