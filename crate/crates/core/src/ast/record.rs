//! Extracted-log records and their newline-delimited JSON form.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::tree::{NodeId, SourceTree};
use super::{
    cyclomatic_complexity, enclosing_block, enclosing_function, find_console_calls,
    match_deleted_logs, FunctionContext,
};

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogRecord {
    /// Exact source text of the call expression.
    pub log_in_string: String,
    /// Resolved function name, "(anonymous)", or "(top-level)".
    pub function_name: String,
    /// One of the four function kinds, or "none" for top-level logs.
    pub function_type: String,
    pub log_loc: LogLoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity_of_function: Option<ComplexityOfFunction>,
    pub arguments: Vec<LogArgument>,
    pub is_async_function: bool,
    pub is_callback_function: bool,
    pub is_anonymous_function: bool,
    pub block_statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub callback_callee_name: Option<String>,
    pub repository_name: String,
    pub commit_sha: String,
    pub folder_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_time: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LogLoc {
    pub start: LocPoint,
    pub end: LocPoint,
}

/// 1-based line, 0-based column; the end column is exclusive.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LocPoint {
    pub line: u32,
    pub column: u32,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ComplexityOfFunction {
    pub name: String,
    pub complexity: u32,
    pub line: u32,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogArgument {
    pub str: String,
    pub type_of_arg: String,
}

pub const TOP_LEVEL_NAME: &str = "(top-level)";
pub const NO_FUNCTION_TYPE: &str = "none";

/// Provenance attached to every record from one file of one commit.
#[derive(Clone, Copy, Debug)]
pub struct RecordContext<'a> {
    pub repo_full_name: &'a str,
    pub sha: &'a str,
    pub file_path: &'a str,
    pub event_time: Option<&'a str>,
}

#[derive(Clone, Debug)]
pub struct ExtractOptions {
    /// Console methods to extract; "log" alone by default.
    pub console_methods: Vec<String>,
    /// Whether `&&`/`||`/`??` count as decision points.
    pub count_logical_operators: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            console_methods: vec!["log".to_string()],
            count_logical_operators: true,
        }
    }
}

/// Builds the record for one located log call.
pub fn build_log_record(
    tree: &SourceTree,
    call: NodeId,
    ctx: &RecordContext<'_>,
    options: &ExtractOptions,
) -> LogRecord {
    let start = tree.start_position(call);
    let end = tree.end_position(call);
    let function = enclosing_function(tree, call);
    let complexity_of_function = function.as_ref().map(|f| ComplexityOfFunction {
        name: f.name.clone(),
        complexity: cyclomatic_complexity(tree, f.function, options.count_logical_operators),
        line: f.line,
    });
    let arguments = tree.node(call).children[1..]
        .iter()
        .map(|&arg| LogArgument {
            str: tree.source_slice(arg).to_string(),
            type_of_arg: tree.node(arg).kind.as_str().to_string(),
        })
        .collect();
    let (function_name, function_type, is_async, is_callback, is_anonymous, callback_callee_name) =
        match &function {
            Some(FunctionContext {
                name,
                function_type,
                is_async,
                is_callback,
                is_anonymous,
                callback_callee_name,
                ..
            }) => (
                name.clone(),
                function_type.as_str().to_string(),
                *is_async,
                *is_callback,
                *is_anonymous,
                callback_callee_name.clone(),
            ),
            None => (
                TOP_LEVEL_NAME.to_string(),
                NO_FUNCTION_TYPE.to_string(),
                false,
                false,
                false,
                None,
            ),
        };
    LogRecord {
        log_in_string: tree.source_slice(call).to_string(),
        function_name,
        function_type,
        log_loc: LogLoc {
            start: LocPoint {
                line: start.line,
                column: start.column,
            },
            end: LocPoint {
                line: end.line,
                column: end.column,
            },
        },
        complexity_of_function,
        arguments,
        is_async_function: is_async,
        is_callback_function: is_callback,
        is_anonymous_function: is_anonymous,
        block_statement: enclosing_block(tree, call).as_str().to_string(),
        callback_callee_name,
        repository_name: ctx.repo_full_name.replace('/', "_"),
        commit_sha: ctx.sha.to_string(),
        folder_path: flatten_path(ctx.file_path),
        event_time: ctx.event_time.map(str::to_string),
    }
}

/// Records for every log on a deleted line of one parsed file, in source
/// order.
pub fn extract_file_records(
    tree: &SourceTree,
    deleted_lines: &BTreeSet<u32>,
    ctx: &RecordContext<'_>,
    options: &ExtractOptions,
) -> Vec<LogRecord> {
    let methods: Vec<&str> = options.console_methods.iter().map(String::as_str).collect();
    let calls = find_console_calls(tree, &methods);
    match_deleted_logs(tree, &calls, deleted_lines)
        .into_iter()
        .map(|call| build_log_record(tree, call, ctx, options))
        .collect()
}

/// Path separators and dots collapse to underscores:
/// src/components/area.js becomes src_components_area_js.
pub fn flatten_path(path: &str) -> String {
    path.chars()
        .map(|c| match c {
            '/' | '\\' | '.' => '_',
            other => other,
        })
        .collect()
}

pub fn write_records<W: Write>(mut w: W, records: &[LogRecord]) -> io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut w, record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(r: R) -> io::Result<Vec<LogRecord>> {
    let mut records = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line).map_err(io::Error::other)?);
    }
    Ok(records)
}
