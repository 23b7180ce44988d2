//! Folds over extracted log records, and the whole-file function census
//! used as the comparison baseline for the flag distributions.

use chrono::{DateTime, Utc};

use crate::ast::record::{LogArgument, LogRecord, NO_FUNCTION_TYPE};
use crate::ast::{classify_function, find_all_functions, strip_quotes, SourceTree};
use crate::semantics::normalize_literal;

use super::{monthly_async_points, top_names, Distribution, IntersectionTable, MonthlyAsyncPoint};

/// Counts of records per enclosing-block kind.
pub fn block_distribution(records: &[LogRecord]) -> Distribution {
    Distribution::from_labels(records.iter().map(|r| r.block_statement.as_str()))
}

/// Counts of records per enclosing-function kind, including the "none"
/// bucket for top-level logs.
pub fn function_type_distribution(records: &[LogRecord]) -> Distribution {
    Distribution::from_labels(records.iter().map(|r| r.function_type.as_str()))
}

/// Counts of records per argument count, labeled by the decimal count.
pub fn argument_count_distribution(records: &[LogRecord]) -> Distribution {
    Distribution::from_labels(records.iter().map(|r| r.arguments.len().to_string()))
}

/// Assigns every record to one of the eight (async, callback, anonymous)
/// cells.
pub fn flag_intersections(records: &[LogRecord]) -> IntersectionTable {
    IntersectionTable::from_flags(records.iter().map(|r| {
        (
            r.is_async_function,
            r.is_callback_function,
            r.is_anonymous_function,
        )
    }))
}

/// Share of records logged from async functions per calendar month.
/// Records without a parseable event time are skipped.
pub fn monthly_async_series(records: &[LogRecord]) -> Vec<MonthlyAsyncPoint> {
    monthly_async_points(records.iter().filter_map(|r| {
        let at = r.event_time.as_deref()?.parse::<DateTime<Utc>>().ok()?;
        Some((at, r.is_async_function))
    }))
}

/// Which name a record contributes to a frequency ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKey {
    /// Resolved enclosing-function names; top-level records have no
    /// function and are skipped, unresolved names count as "(anonymous)".
    FunctionName,
    /// Callee names of the calls that received the enclosing callback.
    CallbackCalleeName,
    /// Normalized literal argument texts; a record contributes one entry
    /// per literal or template argument.
    NormalizedLiteral,
}

/// Ranks the `n` most frequent names under the given key: descending
/// count, ties lexicographic. Records without the key contribute nothing.
pub fn top_record_names(records: &[LogRecord], key: NameKey, n: usize) -> Vec<(String, u64)> {
    match key {
        NameKey::FunctionName => top_names(
            records
                .iter()
                .filter(|r| r.function_type != NO_FUNCTION_TYPE)
                .map(|r| r.function_name.as_str()),
            n,
        ),
        NameKey::CallbackCalleeName => top_names(
            records
                .iter()
                .filter_map(|r| r.callback_callee_name.as_deref()),
            n,
        ),
        NameKey::NormalizedLiteral => top_names(
            records
                .iter()
                .flat_map(|r| r.arguments.iter().filter_map(literal_text))
                .map(|text| normalize_literal(text)),
            n,
        ),
    }
}

fn literal_text(arg: &LogArgument) -> Option<&str> {
    match arg.type_of_arg.as_str() {
        "Literal" | "TemplateLiteral" => Some(strip_quotes(&arg.str)),
        _ => None,
    }
}

/// How many records carry literal arguments, under both notions of
/// "literal": text only (string or template), and any literal token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LiteralShare {
    pub total: u64,
    /// Records with at least one string or template argument.
    pub with_text_literal: u64,
    /// Records with at least one literal of any kind.
    pub with_any_literal: u64,
}

pub fn literal_share(records: &[LogRecord]) -> LiteralShare {
    let mut share = LiteralShare {
        total: records.len() as u64,
        ..LiteralShare::default()
    };
    for record in records {
        if record.arguments.iter().any(is_text_argument) {
            share.with_text_literal += 1;
        }
        if record
            .arguments
            .iter()
            .any(|a| literal_text(a).is_some())
        {
            share.with_any_literal += 1;
        }
    }
    share
}

pub(crate) fn is_text_argument(arg: &LogArgument) -> bool {
    arg.type_of_arg == "TemplateLiteral"
        || (arg.type_of_arg == "Literal"
            && arg.str.starts_with(['"', '\'', '`']))
}

/// Function census over whole files. The three flags overlap, so the
/// columns need not sum to the total; `others` counts functions with none
/// of them set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BaselineCounts {
    pub total: u64,
    pub async_count: u64,
    pub anonymous_count: u64,
    pub callback_count: u64,
    pub others: u64,
}

/// Classifies every function-like node in the given parsed files.
pub fn baseline_function_distribution<'a, I>(sources: I) -> BaselineCounts
where
    I: IntoIterator<Item = &'a SourceTree>,
{
    let mut counts = BaselineCounts::default();
    for tree in sources {
        for f in find_all_functions(tree) {
            let ctx = classify_function(tree, f);
            counts.total += 1;
            if ctx.is_async {
                counts.async_count += 1;
            }
            if ctx.is_anonymous {
                counts.anonymous_count += 1;
            }
            if ctx.is_callback {
                counts.callback_count += 1;
            }
            if !ctx.is_async && !ctx.is_anonymous && !ctx.is_callback {
                counts.others += 1;
            }
        }
    }
    counts
}
