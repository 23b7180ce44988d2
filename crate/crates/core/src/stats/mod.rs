//! Corpus-level aggregates: label distributions, exclusive flag
//! intersections, monthly async series, top-N name tables, Welch's t-test,
//! summary statistics, repository activity curves, and Cohen's kappa.
//!
//! Every function here is a pure fold over its input; aggregation order
//! never changes a result, so callers may merge partial results from
//! parallel workers in any order.

mod records;
mod special;

pub use records::{
    argument_count_distribution, baseline_function_distribution, block_distribution,
    flag_intersections, function_type_distribution, literal_share, monthly_async_series,
    top_record_names, BaselineCounts, LiteralShare, NameKey,
};
pub(crate) use records::is_text_argument;
pub use special::{ln_gamma, reg_inc_beta, student_t_sf};

use std::collections::BTreeMap;

use chrono::{DateTime, Datelike, Utc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("sample needs at least {min} values, got {got}")]
    Undersized { min: usize, got: usize },
    #[error("both samples have zero variance")]
    ZeroVariance,
    #[error("empty input")]
    Empty,
    #[error("label sequences differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("chance agreement is 1, kappa is undefined")]
    KappaUndefined,
    #[error("query date precedes the last-update timestamp")]
    QueryDateBeforeUpdate,
}

/// Labeled counts plus the matching fractions of the total.
///
/// Entries are ordered by descending count with lexicographic tie-breaks,
/// so serializing a distribution is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub total: u64,
    pub entries: Vec<DistributionEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionEntry {
    pub label: String,
    pub count: u64,
    pub fraction: f64,
}

impl Distribution {
    pub fn from_labels<I>(labels: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut total = 0u64;
        for label in labels {
            *counts.entry(label.into()).or_insert(0) += 1;
            total += 1;
        }
        let mut entries: Vec<DistributionEntry> = counts
            .into_iter()
            .map(|(label, count)| DistributionEntry {
                label,
                count,
                fraction: count as f64 / total as f64,
            })
            .collect();
        entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
        Distribution { total, entries }
    }

    pub fn fraction(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.fraction)
    }

    pub fn count(&self, label: &str) -> u64 {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.count)
            .unwrap_or(0)
    }
}

/// Exclusive cell counts over the three function flags, one cell per
/// subset of {async, callback, anonymous}: every record lands in exactly
/// one cell, so the eight counts always sum to the total.
///
/// Cells are indexed by packing the flags into bits:
/// `async << 2 | callback << 1 | anonymous`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntersectionTable {
    pub cells: [u64; 8],
    pub total: u64,
}

impl IntersectionTable {
    pub fn from_flags<I>(flags: I) -> Self
    where
        I: IntoIterator<Item = (bool, bool, bool)>,
    {
        let mut table = IntersectionTable::default();
        for (is_async, is_callback, is_anonymous) in flags {
            table.cells[Self::index(is_async, is_callback, is_anonymous)] += 1;
            table.total += 1;
        }
        table
    }

    pub fn index(is_async: bool, is_callback: bool, is_anonymous: bool) -> usize {
        ((is_async as usize) << 2) | ((is_callback as usize) << 1) | (is_anonymous as usize)
    }

    pub fn cell(&self, is_async: bool, is_callback: bool, is_anonymous: bool) -> u64 {
        self.cells[Self::index(is_async, is_callback, is_anonymous)]
    }

    /// Human-readable cell label for the packed index, e.g. `"async+anonymous"`.
    pub fn label(index: usize) -> &'static str {
        const LABELS: [&str; 8] = [
            "none",
            "anonymous",
            "callback",
            "callback+anonymous",
            "async",
            "async+anonymous",
            "async+callback",
            "async+callback+anonymous",
        ];
        LABELS[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    /// P(T > t): tests whether sample A's mean exceeds sample B's.
    OneSidedGreater,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub sidedness: Sidedness,
}

/// Welch's unequal-variance t-test.
///
/// `t = (mean_a − mean_b) / sqrt(s²_a/n_a + s²_b/n_b)` with
/// Welch–Satterthwaite degrees of freedom. The one-sided p-value is the
/// Student-t upper tail at `t`; swapping the samples negates `t` and maps
/// the one-sided p to its complement.
pub fn welch_t_test(
    sample_a: &[f64],
    sample_b: &[f64],
    sidedness: Sidedness,
) -> Result<TTestResult, StatsError> {
    for s in [sample_a, sample_b] {
        if s.len() < 2 {
            return Err(StatsError::Undersized {
                min: 2,
                got: s.len(),
            });
        }
    }
    let (na, nb) = (sample_a.len() as f64, sample_b.len() as f64);
    let (ma, mb) = (mean(sample_a), mean(sample_b));
    let (va, vb) = (sample_variance(sample_a, ma), sample_variance(sample_b, mb));
    if va == 0.0 && vb == 0.0 {
        return Err(StatsError::ZeroVariance);
    }

    let sea = va / na;
    let seb = vb / nb;
    let t = (ma - mb) / (sea + seb).sqrt();
    let df = (sea + seb).powi(2) / (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));

    let upper_tail = student_t_sf(t, df);
    let p_value = match sidedness {
        Sidedness::OneSidedGreater => upper_tail,
        Sidedness::TwoSided => 2.0 * student_t_sf(t.abs(), df),
    };
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value,
        sidedness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for singletons.
    pub std_dev: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

pub fn summary_stats(values: &[f64]) -> Result<SummaryStats, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let m = mean(&sorted);
    let std_dev = if n == 1 {
        0.0
    } else {
        sample_variance(&sorted, m).sqrt()
    };
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(SummaryStats {
        mean: m,
        std_dev,
        min: sorted[0],
        median,
        max: sorted[n - 1],
    })
}

/// Chance-corrected inter-rater agreement over two equal-length label
/// sequences: `κ = (p_o − p_e) / (1 − p_e)` where `p_e` comes from the
/// marginal label frequencies of each rater.
pub fn cohens_kappa<T: Ord>(labels_a: &[T], labels_b: &[T]) -> Result<f64, StatsError> {
    if labels_a.len() != labels_b.len() {
        return Err(StatsError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = labels_a.len() as f64;
    let mut marginals: BTreeMap<&T, (u64, u64)> = BTreeMap::new();
    let mut agreements = 0u64;
    for (a, b) in labels_a.iter().zip(labels_b) {
        marginals.entry(a).or_insert((0, 0)).0 += 1;
        marginals.entry(b).or_insert((0, 0)).1 += 1;
        if a == b {
            agreements += 1;
        }
    }
    let p_o = agreements as f64 / n;
    let p_e: f64 = marginals
        .values()
        .map(|&(ca, cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    if p_e >= 1.0 {
        return Err(StatsError::KappaUndefined);
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// One month of the async-share time series.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyAsyncPoint {
    /// Calendar month in UTC, rendered `YYYY-MM`.
    pub month: String,
    pub total: u64,
    pub async_count: u64,
    /// `async_count / total × 100`.
    pub percentage: f64,
}

/// Buckets `(event_time, is_async)` pairs by UTC calendar month; months
/// with no records are omitted. Output is sorted by month.
pub fn monthly_async_points<I>(items: I) -> Vec<MonthlyAsyncPoint>
where
    I: IntoIterator<Item = (DateTime<Utc>, bool)>,
{
    let mut buckets: BTreeMap<(i32, u32), (u64, u64)> = BTreeMap::new();
    for (at, is_async) in items {
        let cell = buckets.entry((at.year(), at.month())).or_insert((0, 0));
        cell.0 += 1;
        if is_async {
            cell.1 += 1;
        }
    }
    buckets
        .into_iter()
        .map(|((year, month), (total, async_count))| MonthlyAsyncPoint {
            month: format!("{year:04}-{month:02}"),
            total,
            async_count,
            percentage: async_count as f64 / total as f64 * 100.0,
        })
        .collect()
}

/// Ranks names by frequency: descending count, ties lexicographic, first
/// `n` entries. Extending `n` only ever appends to the ranking.
pub fn top_names<I>(names: I, n: usize) -> Vec<(String, u64)>
where
    I: IntoIterator,
    I::Item: Into<String>,
{
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for name in names {
        *counts.entry(name.into()).or_insert(0) += 1;
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(n);
    ranked
}

/// One step of the cumulative repository-activity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityPoint {
    pub months_since_update: u32,
    pub cumulative_fraction: f64,
}

/// Average Gregorian month length in days; fixes the month bucketing.
pub const DAYS_PER_MONTH: f64 = 30.44;

/// Cumulative share of repositories whose last update lies within N months
/// of `query_date`, for every N from 0 to the oldest gap. The curve is
/// nondecreasing and ends at 1.0.
///
/// A month gap is `floor(days / 30.44)` where `days` is the exact
/// (fractional) day count between update and query time.
pub fn cumulative_activity_curve(
    last_updated: &[DateTime<Utc>],
    query_date: DateTime<Utc>,
) -> Result<Vec<ActivityPoint>, StatsError> {
    if last_updated.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut gaps = Vec::with_capacity(last_updated.len());
    for &at in last_updated {
        if at > query_date {
            return Err(StatsError::QueryDateBeforeUpdate);
        }
        let days = (query_date - at).num_seconds() as f64 / 86_400.0;
        gaps.push((days / DAYS_PER_MONTH).floor() as u32);
    }
    let max_gap = *gaps.iter().max().expect("nonempty");
    let mut per_month = vec![0u64; max_gap as usize + 1];
    for &g in &gaps {
        per_month[g as usize] += 1;
    }
    let total = gaps.len() as f64;
    let mut seen = 0u64;
    Ok(per_month
        .iter()
        .enumerate()
        .map(|(month, &count)| {
            seen += count;
            ActivityPoint {
                months_since_update: month as u32,
                cumulative_fraction: seen as f64 / total,
            }
        })
        .collect())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64], mean: f64) -> f64 {
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}
