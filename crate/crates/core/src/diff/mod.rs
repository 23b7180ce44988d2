//! Per-file change extraction: which source files a commit touched, which
//! of them are worth analyzing, and which lines the commit deleted.
//!
//! Line numbers are always 1-based. Deleted lines index the before-image
//! of a file, added lines the after-image; everything downstream that
//! inspects removed statements works in before-file coordinates.

mod lines;
mod unified;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use unified::{parse_unified_diff, render_unified_diff, PatchError};

const MINIFIED_PREFIX_CHARS: usize = 5_000;
const MINIFIED_WHITESPACE_RATIO: f64 = 0.12;
const MINIFIED_MEAN_LINE_LEN: f64 = 500.0;

const DEFAULT_EXTENSIONS: &[&str] = &["js", "ts"];
const EXTENDED_EXTENSIONS: &[&str] = &["jsx", "tsx", "mjs", "cjs"];

const LIBRARY_SEGMENTS: &[&str] = &["node_modules", "vendor", "dist", "build", "bower_components"];

/// Why a changed file was dropped before line analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    Minified,
    Library,
    NonTargetExtension,
}

/// One changed file within a commit, reduced to line-set form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileDiff {
    pub path: String,
    pub before_content: String,
    /// Empty when the commit deleted the file outright.
    pub after_content: String,
    pub deleted_lines: BTreeSet<u32>,
    pub added_lines: BTreeSet<u32>,
    /// `Some` means the file was gated out; gated files carry empty line sets.
    pub excluded: Option<ExclusionReason>,
}

impl FileDiff {
    /// Builds a diff from full before/after contents, applying the
    /// extension, library-path, and minified gates in that order.
    pub fn build(path: &str, before: &str, after: &str, extended_extensions: bool) -> FileDiff {
        let before = normalize_newlines(before);
        let after = normalize_newlines(after);
        if let Some(reason) = exclusion_for(path, &before, extended_extensions) {
            return FileDiff::excluded(path, before, after, reason);
        }
        let (deleted_lines, added_lines) = compute_line_diff(&before, &after);
        FileDiff {
            path: path.to_string(),
            before_content: before,
            after_content: after,
            deleted_lines,
            added_lines,
            excluded: None,
        }
    }

    /// Builds a diff from before-content plus unified-diff patch text, for
    /// sources that serve patches instead of after-images. The after
    /// content is left empty; deleted-line analysis does not need it.
    pub fn from_patch(
        path: &str,
        before: &str,
        patch: &str,
        extended_extensions: bool,
    ) -> Result<FileDiff, PatchError> {
        let before = normalize_newlines(before);
        if let Some(reason) = exclusion_for(path, &before, extended_extensions) {
            return Ok(FileDiff::excluded(path, before, String::new(), reason));
        }
        let (deleted_lines, added_lines) = parse_unified_diff(&normalize_newlines(patch))?;
        Ok(FileDiff {
            path: path.to_string(),
            before_content: before,
            after_content: String::new(),
            deleted_lines,
            added_lines,
            excluded: None,
        })
    }

    fn excluded(path: &str, before: String, after: String, reason: ExclusionReason) -> FileDiff {
        FileDiff {
            path: path.to_string(),
            before_content: before,
            after_content: after,
            deleted_lines: BTreeSet::new(),
            added_lines: BTreeSet::new(),
            excluded: Some(reason),
        }
    }
}

fn exclusion_for(path: &str, before: &str, extended: bool) -> Option<ExclusionReason> {
    if !is_target_extension(path, extended) {
        Some(ExclusionReason::NonTargetExtension)
    } else if detect_library(path) {
        Some(ExclusionReason::Library)
    } else if detect_minified(before) {
        Some(ExclusionReason::Minified)
    } else {
        None
    }
}

/// Keeps only paths with an analyzable source extension.
pub fn filter_target_files<S: AsRef<str>>(paths: &[S], extended_extensions: bool) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.as_ref())
        .filter(|p| is_target_extension(p, extended_extensions))
        .map(str::to_string)
        .collect()
}

pub fn is_target_extension(path: &str, extended_extensions: bool) -> bool {
    let Some((_, ext)) = path.rsplit_once('.') else {
        return false;
    };
    let ext = ext.to_ascii_lowercase();
    DEFAULT_EXTENSIONS.contains(&ext.as_str())
        || (extended_extensions && EXTENDED_EXTENSIONS.contains(&ext.as_str()))
}

/// Heuristic for machine-compacted sources, decided entirely by the first
/// 5,000 characters: sparse whitespace or very long lines.
pub fn detect_minified(source: &str) -> bool {
    if source.is_empty() {
        return false;
    }
    let mut total = 0usize;
    let mut whitespace = 0usize;
    let mut newlines = 0usize;
    for c in source.chars().take(MINIFIED_PREFIX_CHARS) {
        total += 1;
        if c.is_whitespace() {
            whitespace += 1;
        }
        if c == '\n' {
            newlines += 1;
        }
    }
    let ws_ratio = whitespace as f64 / total as f64;
    let mean_line_len = (total - newlines) as f64 / (newlines + 1) as f64;
    ws_ratio < MINIFIED_WHITESPACE_RATIO || mean_line_len > MINIFIED_MEAN_LINE_LEN
}

/// True for paths under dependency/output directories and for `*.min.*`
/// artifacts of the target languages.
pub fn detect_library(path: &str) -> bool {
    let mut segments = path.split(['/', '\\']).filter(|s| !s.is_empty()).peekable();
    while let Some(segment) = segments.next() {
        let is_last = segments.peek().is_none();
        if !is_last && LIBRARY_SEGMENTS.contains(&segment) {
            return true;
        }
        if is_last {
            let lower = segment.to_ascii_lowercase();
            if lower.ends_with(".min.js") || lower.ends_with(".min.ts") {
                return true;
            }
        }
    }
    false
}

/// Minimal line-granularity edit script between two texts.
///
/// Returns 1-based deleted line numbers (indexing `before`) and added
/// line numbers (indexing `after`). The result is orientation-symmetric:
/// swapping the arguments swaps the two sets exactly.
pub fn compute_line_diff(before: &str, after: &str) -> (BTreeSet<u32>, BTreeSet<u32>) {
    let before_lines = unified::split_lines(before);
    let after_lines = unified::split_lines(after);
    lines::diff_line_sets(&before_lines, &after_lines)
}

/// CRLF and bare-CR line endings rewritten as LF.
pub fn normalize_newlines(text: &str) -> String {
    if !text.contains('\r') {
        return text.to_string();
    }
    text.replace("\r\n", "\n").replace('\r', "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn filter_keeps_default_extensions() {
        let paths = ["a.js", "b.py", "c.ts"];
        assert_eq!(filter_target_files(&paths, false), vec!["a.js", "c.ts"]);
    }

    #[test]
    fn filter_uppercase_jsx_needs_extended_set() {
        let paths = ["x.JSX"];
        assert_eq!(filter_target_files(&paths, false), Vec::<String>::new());
        assert_eq!(filter_target_files(&paths, true), vec!["x.JSX"]);
    }

    #[test]
    fn filter_fifty_path_fixture() {
        // 12 analyzable paths scattered among 38 others.
        let mut paths: Vec<String> = Vec::new();
        for i in 0..9 {
            paths.push(format!("src/mod{i}/index.js")); // 9 targets
        }
        paths.push("lib/util.ts".into()); // 10
        paths.push("deep/nested/tool.Ts".into()); // 11 (case-insensitive)
        paths.push("topmost.js".into()); // 12
        for i in 0..14 {
            paths.push(format!("docs/page{i}.md"));
        }
        for i in 0..10 {
            paths.push(format!("assets/img{i}.png"));
        }
        for i in 0..8 {
            paths.push(format!("scripts/run{i}.py"));
        }
        paths.push("Makefile".into());
        paths.push("a.jsx".into());
        paths.push("b.mjs".into());
        paths.push("c.cjs".into());
        paths.push("d.tsx".into());
        paths.push("noext".into());
        assert_eq!(paths.len(), 50);
        assert_eq!(filter_target_files(&paths, false).len(), 12);
    }

    #[test]
    fn minified_single_long_line() {
        let source = "x".repeat(5_000);
        assert!(detect_minified(&source));
    }

    #[test]
    fn minified_rejects_indented_function() {
        let mut source = String::from("function totals(rows) {\n");
        source.push_str("    let sum = 0;\n");
        for i in 0..36 {
            source.push_str(&format!("    sum += rows[{i}].value * WEIGHTS[{i}];\n"));
        }
        source.push_str("    return sum;\n}\n");
        assert_eq!(source.lines().count(), 40);

        // The rule's two measures, recomputed plainly from the raw bytes
        // (the fixture is shorter than the prefix window, so whole-input
        // counts are the prefix counts).
        let ws = source.bytes().filter(|b| b.is_ascii_whitespace()).count();
        assert!((ws as f64) / (source.len() as f64) >= 0.12);
        let line_total: usize = source.lines().map(str::len).sum();
        assert!((line_total as f64) / (source.lines().count() as f64) <= 500.0);

        assert!(!detect_minified(&source));
    }

    #[test]
    fn minified_empty_input_is_not_minified() {
        assert!(!detect_minified(""));
    }

    #[test]
    fn library_paths() {
        assert!(detect_library("node_modules/lodash/index.js"));
        assert!(!detect_library("src/app.js"));
        assert!(detect_library("assets/jquery.min.js"));
        assert!(detect_library("ui/dist/bundle.js"));
        assert!(detect_library("third/party\\vendor\\x.js"));
        // Segment rule applies to directories, not a file named like one.
        assert!(!detect_library("src/build.js"));
        assert!(!detect_library("distribution/app.js"));
    }

    #[test]
    fn diff_identity_is_empty() {
        let text = "a\nb\nc\n";
        let (del, add) = compute_line_diff(text, text);
        assert!(del.is_empty());
        assert!(add.is_empty());
    }

    #[test]
    fn diff_middle_line_removed() {
        let (del, add) = compute_line_diff("a\nb\nc\n", "a\nc\n");
        assert_eq!(del, BTreeSet::from([2]));
        assert!(add.is_empty());
    }

    #[test]
    fn diff_insertion_at_top() {
        let (del, add) = compute_line_diff("b\n", "a\nb\n");
        assert!(del.is_empty());
        assert_eq!(add, BTreeSet::from([1]));
    }

    #[test]
    fn diff_unrelated_files() {
        let (del, add) = compute_line_diff("a\nb\n", "c\nd\ne\n");
        assert_eq!(del, BTreeSet::from([1, 2]));
        assert_eq!(add, BTreeSet::from([1, 2, 3]));
    }

    /// 30 distinct lines on each side make the minimal edit script unique,
    /// so any correct diff implementation must produce identical sets.
    fn thirty_line_pair() -> (String, String) {
        let before: String = (0..30).map(|i| format!("line number {i}\n")).collect();
        let mut after_lines: Vec<String> = (0..30).map(|i| format!("line number {i}")).collect();
        after_lines.remove(27);
        after_lines.remove(12);
        after_lines.remove(4);
        after_lines[10] = "replacement ten".into();
        after_lines.insert(20, "fresh twenty".into());
        let mut after = after_lines.join("\n");
        after.push('\n');
        (before, after)
    }

    fn similar_line_sets(before: &str, after: &str) -> (BTreeSet<u32>, BTreeSet<u32>) {
        let diff = similar::TextDiff::from_lines(before, after);
        let mut del = BTreeSet::new();
        let mut add = BTreeSet::new();
        for op in diff.ops() {
            let (old, old_len, new, new_len) = match *op {
                similar::DiffOp::Delete {
                    old_index, old_len, ..
                } => (old_index, old_len, 0, 0),
                similar::DiffOp::Insert {
                    new_index, new_len, ..
                } => (0, 0, new_index, new_len),
                similar::DiffOp::Replace {
                    old_index,
                    old_len,
                    new_index,
                    new_len,
                } => (old_index, old_len, new_index, new_len),
                similar::DiffOp::Equal { .. } => continue,
            };
            del.extend((old + 1..=old + old_len).map(|n| n as u32));
            add.extend((new + 1..=new + new_len).map(|n| n as u32));
        }
        (del, add)
    }

    #[test]
    fn diff_thirty_line_fixture_matches_reference_tool() {
        let (before, after) = thirty_line_pair();
        let mine = compute_line_diff(&before, &after);
        let reference = similar_line_sets(&before, &after);
        assert_eq!(mine, reference);
    }

    #[test]
    fn parse_single_deletion_hunk() {
        let (del, add) = parse_unified_diff("@@ -2,1 +2,0 @@\n-console.log(x)").unwrap();
        assert_eq!(del, BTreeSet::from([2]));
        assert!(add.is_empty());
    }

    #[test]
    fn parse_empty_patch() {
        let (del, add) = parse_unified_diff("").unwrap();
        assert!(del.is_empty());
        assert!(add.is_empty());
    }

    #[test]
    fn parse_multi_hunk_matches_content_diff() {
        let (before, after) = thirty_line_pair();
        let expected = compute_line_diff(&before, &after);
        let patch = render_unified_diff(&before, &after, &expected.0, &expected.1, 3);
        assert!(patch.matches("@@ -").count() >= 2, "fixture should span hunks");
        assert_eq!(parse_unified_diff(&patch).unwrap(), expected);
    }

    #[test]
    fn parse_rejects_malformed_header() {
        let err = parse_unified_diff("@@ -x,1 +2 @@\n-gone").unwrap_err();
        assert!(matches!(err, PatchError::MalformedHeader(_)));
        assert!(err.to_string().contains("@@ -x,1 +2 @@"));
    }

    #[test]
    fn parse_rejects_truncated_hunk_body() {
        let err = parse_unified_diff("@@ -1,3 +1,3 @@\n a\n-b").unwrap_err();
        assert!(matches!(err, PatchError::InconsistentHunk { .. }));
    }

    #[test]
    fn parse_skips_file_preamble() {
        let patch = "--- a/src/app.js\n+++ b/src/app.js\n@@ -1 +1 @@\n-old\n+new\n";
        let (del, add) = parse_unified_diff(patch).unwrap();
        assert_eq!(del, BTreeSet::from([1]));
        assert_eq!(add, BTreeSet::from([1]));
    }

    #[test]
    fn build_gates_minified_file() {
        let before = format!("{}\n", "m".repeat(5_000));
        let diff = FileDiff::build("src/pack.js", &before, "", false);
        assert_eq!(diff.excluded, Some(ExclusionReason::Minified));
        assert!(diff.deleted_lines.is_empty() && diff.added_lines.is_empty());
    }

    #[test]
    fn build_gates_by_extension_then_library() {
        let d = FileDiff::build("notes.txt", "a\n", "b\n", false);
        assert_eq!(d.excluded, Some(ExclusionReason::NonTargetExtension));
        let d = FileDiff::build("vendor/lib.js", "a\n", "b\n", false);
        assert_eq!(d.excluded, Some(ExclusionReason::Library));
        assert!(d.deleted_lines.is_empty() && d.added_lines.is_empty());
    }

    #[test]
    fn build_diffs_included_file_and_normalizes_crlf() {
        let diff = FileDiff::build("src/app.js", "a\r\nb\r\nc\r\n", "a\nc\n", false);
        assert_eq!(diff.excluded, None);
        assert_eq!(diff.before_content, "a\nb\nc\n");
        assert_eq!(diff.deleted_lines, BTreeSet::from([2]));
    }

    #[test]
    fn from_patch_recovers_sets() {
        let diff = FileDiff::from_patch(
            "src/app.js",
            "a\nb\nc\n",
            "@@ -2,1 +1,0 @@\n-b\n",
            false,
        )
        .unwrap();
        assert_eq!(diff.deleted_lines, BTreeSet::from([2]));
        assert!(diff.added_lines.is_empty());
    }

    fn line_vec() -> impl Strategy<Value = Vec<String>> {
        // A tiny alphabet forces heavy line repetition, the hard case for
        // alignment symmetry.
        prop::collection::vec(
            prop::sample::select(vec!["alpha", "beta", "gamma", "delta", ""]).prop_map(String::from),
            0..24,
        )
    }

    fn join(lines: &[String]) -> String {
        let mut text = lines.join("\n");
        if !lines.is_empty() {
            text.push('\n');
        }
        text
    }

    proptest! {
        #[test]
        fn diff_self_is_always_empty(lines in line_vec()) {
            let text = join(&lines);
            let (del, add) = compute_line_diff(&text, &text);
            prop_assert!(del.is_empty());
            prop_assert!(add.is_empty());
        }

        #[test]
        fn diff_is_orientation_symmetric(a in line_vec(), b in line_vec()) {
            let (a, b) = (join(&a), join(&b));
            let forward = compute_line_diff(&a, &b);
            let backward = compute_line_diff(&b, &a);
            prop_assert_eq!(forward.0, backward.1);
            prop_assert_eq!(forward.1, backward.0);
        }

        /// The sets describe a valid patch (surviving lines pair up
        /// identically) of minimal size (edit distance per the reference
        /// implementation).
        #[test]
        fn diff_is_a_minimal_valid_script(a in line_vec(), b in line_vec()) {
            let (at, bt) = (join(&a), join(&b));
            let (del, add) = compute_line_diff(&at, &bt);
            let kept_a: Vec<&String> = a.iter().enumerate()
                .filter(|(i, _)| !del.contains(&((i + 1) as u32)))
                .map(|(_, l)| l)
                .collect();
            let kept_b: Vec<&String> = b.iter().enumerate()
                .filter(|(i, _)| !add.contains(&((i + 1) as u32)))
                .map(|(_, l)| l)
                .collect();
            prop_assert_eq!(kept_a, kept_b);

            let (rdel, radd) = similar_line_sets(&at, &bt);
            prop_assert_eq!(del.len() + add.len(), rdel.len() + radd.len());
        }

        #[test]
        fn unified_round_trip_preserves_sets(a in line_vec(), b in line_vec(), context in 0usize..4) {
            let (at, bt) = (join(&a), join(&b));
            let sets = compute_line_diff(&at, &bt);
            let patch = render_unified_diff(&at, &bt, &sets.0, &sets.1, context);
            prop_assert_eq!(parse_unified_diff(&patch).unwrap(), sets);
        }

        #[test]
        fn minified_verdict_fixed_by_prefix(
            body in "[a-z \n]{0,400}",
            tail in "[a-z \n]{0,2000}",
        ) {
            // Pad the prefix window full, then append arbitrary text.
            let mut base = body;
            while base.chars().count() < MINIFIED_PREFIX_CHARS {
                base.push_str("const q = 1;\n");
            }
            let verdict = detect_minified(&base);
            base.push_str(&tail);
            prop_assert_eq!(detect_minified(&base), verdict);
        }
    }
}
