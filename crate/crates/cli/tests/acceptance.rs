//! Release gate: one test per acceptance criterion, each printing a PASS or
//! FAIL line so a `--nocapture` run reads as a checklist.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use logmine_core::ast::record::{
    extract_file_records, ExtractOptions, LocPoint, LogLoc, LogRecord, RecordContext,
};
use logmine_core::ast::{name_function, parse_source, NodeId, SourceSyntax, SourceTree};
use logmine_core::diff::{
    compute_line_diff, parse_unified_diff, render_unified_diff, ExclusionReason, FileDiff,
};
use logmine_core::semantics::normalize_literal;
use logmine_core::stats::{
    cohens_kappa, flag_intersections, welch_t_test, IntersectionTable, Sidedness,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_logmine");

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/acceptance")
        .join(path)
}

fn gate(number: u32, name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {number:2} ({name}): PASS"),
        Err(panic) => {
            println!("criterion {number:2} ({name}): FAIL");
            resume_unwind(panic);
        }
    }
}

fn run(args: &[&str]) {
    let output = Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn pipeline binary");
    assert!(
        output.status.success(),
        "{args:?} exited with {:?}\n{}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
}

/// filter-events, extract, analyze over the committed fixture corpus.
fn run_pipeline(out_dir: &Path, parallelism: &str) {
    let events = fixture("events/2019-05-01-12.json");
    let commits = fixture("commits");
    let out = out_dir.to_str().unwrap();
    run(&[
        "filter-events",
        "--input",
        events.to_str().unwrap(),
        "--output-dir",
        out,
    ]);
    let candidates = out_dir.join("candidates.ndjson");
    run(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        out,
        "--parallelism",
        parallelism,
    ]);
    let records = out_dir.join("records.ndjson");
    run(&[
        "analyze",
        "--records",
        records.to_str().unwrap(),
        "--output-dir",
        out,
    ]);
}

fn ndjson_values(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
        .lines()
        .map(|line| serde_json::from_str(line).expect("well-formed record line"))
        .collect()
}

#[test]
fn criterion_01_removal_fixture_yields_the_golden_records() {
    gate(1, "three-commit fixture extracts the two golden records", || {
        let started = Instant::now();
        let tmp = TempDir::new().unwrap();
        run_pipeline(tmp.path(), "2");

        let got = ndjson_values(&tmp.path().join("records.ndjson"));
        let want = ndjson_values(&fixture("golden/records.ndjson"));
        assert_eq!(got.len(), 2, "exactly two records");
        assert_eq!(want.len(), 2);
        for (record, golden) in got.iter().zip(&want) {
            let fields = golden.as_object().unwrap();
            for (field, value) in fields {
                assert_eq!(record.get(field), Some(value), "field {field}");
            }
            assert_eq!(
                record.as_object().unwrap().len(),
                fields.len(),
                "no extra fields"
            );
        }
        assert!(
            started.elapsed() < Duration::from_secs(5),
            "pipeline finished in {:?}",
            started.elapsed()
        );
    });
}

fn only_function(source: &str) -> (SourceTree, NodeId) {
    let tree = parse_source(source, SourceSyntax::Js { jsx: false }).unwrap();
    let id = tree
        .preorder()
        .find(|&id| tree.node(id).kind.is_function())
        .expect("snippet contains a function");
    (tree, id)
}

#[test]
fn criterion_02_context_derived_function_names() {
    gate(2, "anonymous functions take names from their context", || {
        let cases = [
            ("var cb = function() { return 1; };", "cb"),
            ("fetch(url).then(function() { return 1; });", "then"),
            ("cb = function() { return 1; };", "cb"),
            ("class Text { getText = () => { return 1; }; }", "getText"),
        ];
        for (source, expected) in cases {
            let (tree, func) = only_function(source);
            assert_eq!(name_function(&tree, func), expected, "source {source:?}");
        }
    });
}

#[test]
fn criterion_03_deep_function_log_record_reconstruction() {
    gate(3, "log deep inside a two-branch function rebuilds its record", || {
        let mut source = String::new();
        for i in 1..87 {
            source.push_str(&format!("// filler {i}\n"));
        }
        source.push_str(concat!(
            "function calcAreasByPattern(pattern, areas) {\n",
            "  if (!areas) {\n",
            "    return [];\n",
            "  }\n",
            "  const rows = [];\n",
            "  for (const area of areas) {\n",
            "    rows.push(area);\n",
            "  }\n",
            "    console.log(pattern)\n",
            "  return rows;\n",
            "}\n",
        ));
        let tree = parse_source(&source, SourceSyntax::Js { jsx: false }).unwrap();
        let deleted: BTreeSet<u32> = [95].into_iter().collect();
        let ctx = RecordContext {
            repo_full_name: "0067ED/vue-block",
            sha: "f0ceff46bc35c9caad200fcbc4d53892c5a966a6",
            file_path: "src/components/algorithm/area.js",
            event_time: None,
        };
        let records = extract_file_records(&tree, &deleted, &ctx, &ExtractOptions::default());
        assert_eq!(records.len(), 1);
        let record = &records[0];
        assert_eq!(record.function_name, "calcAreasByPattern");
        assert_eq!(record.function_type, "FunctionDeclaration");
        assert_eq!(record.log_loc.start, LocPoint { line: 95, column: 4 });
        let complexity = record
            .complexity_of_function
            .as_ref()
            .expect("named enclosing function carries complexity");
        assert_eq!(complexity.name, "calcAreasByPattern");
        assert_eq!(complexity.complexity, 3);
        assert_eq!(record.arguments.len(), 1);
        assert_eq!(record.arguments[0].str, "pattern");
        assert_eq!(record.arguments[0].type_of_arg, "Identifier");
        assert!(!record.is_async_function);
        assert!(!record.is_callback_function);
        assert!(!record.is_anonymous_function);
    });
}

#[test]
fn criterion_04_unequal_variance_t_oracle() {
    gate(4, "t statistic, df, and one-sided p match hand values", || {
        let result =
            welch_t_test(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], Sidedness::OneSidedGreater).unwrap();
        assert!(
            (result.t_statistic + 1.5492).abs() < 1e-4,
            "t = {}",
            result.t_statistic
        );
        assert!(
            (result.degrees_of_freedom - 2.9412).abs() < 1e-4,
            "df = {}",
            result.degrees_of_freedom
        );

        let same = [4.0, 8.0, 15.0, 16.0, 23.0, 42.0];
        let tied = welch_t_test(&same, &same, Sidedness::OneSidedGreater).unwrap();
        assert_eq!(tied.t_statistic, 0.0);
        assert!((tied.p_value - 0.5).abs() < 1e-10, "p = {}", tied.p_value);

        let a = [3.1, 4.7, 5.2, 6.9, 7.3];
        let b = [2.2, 4.1, 8.8, 9.5];
        let ab = welch_t_test(&a, &b, Sidedness::OneSidedGreater).unwrap();
        let ba = welch_t_test(&b, &a, Sidedness::OneSidedGreater).unwrap();
        assert!((ab.t_statistic + ba.t_statistic).abs() < 1e-12);
        assert!((ab.degrees_of_freedom - ba.degrees_of_freedom).abs() < 1e-12);
        assert!((ab.p_value + ba.p_value - 1.0).abs() < 1e-12);
    });
}

fn flag_record(is_async: bool, is_callback: bool, is_anonymous: bool) -> LogRecord {
    LogRecord {
        log_in_string: "console.log(x)".into(),
        function_name: "f".into(),
        function_type: "FunctionDeclaration".into(),
        log_loc: LogLoc {
            start: LocPoint { line: 1, column: 0 },
            end: LocPoint { line: 1, column: 14 },
        },
        complexity_of_function: None,
        arguments: Vec::new(),
        is_async_function: is_async,
        is_callback_function: is_callback,
        is_anonymous_function: is_anonymous,
        block_statement: "Program".into(),
        callback_callee_name: None,
        repository_name: "demo_webapp".into(),
        commit_sha: "0".repeat(40),
        folder_path: "index_js".into(),
        event_time: None,
    }
}

#[test]
fn criterion_05_intersection_cells_partition_the_records() {
    gate(5, "eight exclusive flag cells partition synthetic records", || {
        let mut seeds = StdRng::seed_from_u64(0x1f2e_3d4c);
        for round in 0..100 {
            let mut rng = StdRng::seed_from_u64(seeds.gen());
            let flags: Vec<(bool, bool, bool)> = (0..10_000)
                .map(|_| (rng.gen_bool(0.3), rng.gen_bool(0.4), rng.gen_bool(0.5)))
                .collect();
            let table = IntersectionTable::from_flags(flags.iter().copied());
            let mut brute = [0u64; 8];
            for &(is_async, is_callback, is_anonymous) in &flags {
                let cell =
                    (is_async as usize) * 4 + (is_callback as usize) * 2 + is_anonymous as usize;
                brute[cell] += 1;
            }
            assert_eq!(table.cells, brute, "round {round}");
            assert_eq!(table.cells.iter().sum::<u64>(), 10_000);
            assert_eq!(table.total, 10_000);
        }

        // The record-level fold sees the same cells as the raw flag table.
        let mut rng = StdRng::seed_from_u64(99);
        let records: Vec<LogRecord> = (0..10_000)
            .map(|_| flag_record(rng.gen_bool(0.2), rng.gen_bool(0.5), rng.gen_bool(0.7)))
            .collect();
        let flags = records
            .iter()
            .map(|r| (r.is_async_function, r.is_callback_function, r.is_anonymous_function));
        assert_eq!(flag_intersections(&records), IntersectionTable::from_flags(flags));
    });
}

fn grouped_runs(text: &str) -> Vec<(char, usize)> {
    let mut groups: Vec<(char, usize)> = Vec::new();
    for c in text.chars() {
        match groups.last_mut() {
            Some((last, count)) if *last == c => *count += 1,
            _ => groups.push((c, 1)),
        }
    }
    groups
}

#[test]
fn criterion_06_literal_normalization_properties() {
    gate(6, "run compression and number folding hold on random text", || {
        assert_eq!(normalize_literal("-----"), "-R");
        assert_eq!(normalize_literal("42"), "<NUM>");
        assert_eq!(normalize_literal("3.5"), "<NUM>");

        let alphabet: Vec<char> = "abR- x7.!".chars().collect();
        let mut rng = StdRng::seed_from_u64(0xace);
        for _ in 0..10_000 {
            let len = rng.gen_range(0..32);
            let text: String = (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect();
            let out = normalize_literal(&text);

            let digits = text.chars().filter(|c| c.is_ascii_digit()).count();
            let dots = text.chars().filter(|&c| c == '.').count();
            if !text.is_empty() && digits + dots == text.chars().count() && digits > 0 && dots <= 1
            {
                assert_eq!(out, "<NUM>", "numeric input {text:?}");
                assert!(out.len() <= text.len().max(5));
                continue;
            }

            // Independent route: split into maximal runs, then map each run.
            let mut expect = String::new();
            for (c, count) in grouped_runs(&text) {
                if count > 3 {
                    expect.push(c);
                    expect.push('R');
                } else {
                    expect.extend(std::iter::repeat(c).take(count));
                }
            }
            assert_eq!(out, expect, "input {text:?}");
            assert!(out.len() <= text.len(), "never lengthens {text:?}");

            // Any output run longer than three can only be marker 'R's
            // butting against a kept run of 'R'; compressible runs of
            // content never survive or appear.
            for (c, count) in grouped_runs(&out) {
                assert!(count <= 3 || c == 'R', "run of {c:?} x{count} in {out:?}");
            }
        }
    });
}

#[test]
fn criterion_07_line_diffs_round_trip_through_patch_text() {
    gate(7, "rendered patches parse back to the same line sets", || {
        let vocab = [
            "const x = 1;",
            "console.log(x);",
            "return x;",
            "if (x) {",
            "}",
            "x += 1;",
            "",
        ];
        let mut rng = StdRng::seed_from_u64(0xd1ff);
        for round in 0..200 {
            let before_len = rng.gen_range(0..30);
            let before_lines: Vec<&str> = (0..before_len)
                .map(|_| vocab[rng.gen_range(0..vocab.len())])
                .collect();
            let mut after_lines: Vec<&str> = Vec::new();
            for &line in &before_lines {
                match rng.gen_range(0..5) {
                    0 => {}
                    1 => after_lines.push(vocab[rng.gen_range(0..vocab.len())]),
                    2 => {
                        after_lines.push(line);
                        after_lines.push(vocab[rng.gen_range(0..vocab.len())]);
                    }
                    _ => after_lines.push(line),
                }
            }
            if rng.gen_bool(0.3) {
                after_lines.push(vocab[rng.gen_range(0..vocab.len())]);
            }
            let before = before_lines.join("\n");
            let after = after_lines.join("\n");

            let (deleted, added) = compute_line_diff(&before, &after);
            let context = rng.gen_range(0..4);
            let patch = render_unified_diff(&before, &after, &deleted, &added, context);
            let (deleted_back, added_back) = parse_unified_diff(&patch)
                .unwrap_or_else(|e| panic!("round {round}: {e}\n{patch}"));
            assert_eq!(deleted_back, deleted, "round {round} deleted\n{patch}");
            assert_eq!(added_back, added, "round {round} added\n{patch}");
        }
    });
}

#[test]
fn criterion_08_minified_twin_excluded_pretty_twin_counted() {
    gate(8, "one-line minified source is skipped, pretty twin kept", || {
        let statements: Vec<String> = (0..560).map(|i| format!("var v{i}={i};")).collect();
        let minified_before = format!("{}console.log(v0);\n", statements.concat());
        let minified_after = format!("{}\n", statements.concat());
        assert!(minified_before.len() > 5000);
        assert_eq!(minified_before.matches('\n').count(), 1);
        let pretty_before = format!("{}\nconsole.log(v0);\n", statements.join("\n"));
        let pretty_after = format!("{}\n", statements.join("\n"));

        let compact = FileDiff::build("compact.js", &minified_before, &minified_after, false);
        assert_eq!(compact.excluded, Some(ExclusionReason::Minified));
        assert!(compact.deleted_lines.is_empty());
        let pretty = FileDiff::build("pretty.js", &pretty_before, &pretty_after, false);
        assert_eq!(pretty.excluded, None);

        // Same pair through the pipeline: only the pretty file contributes.
        let tmp = TempDir::new().unwrap();
        let sha = "feedfacefeedfacefeedfacefeedfacefeedface";
        let commit_dir = tmp.path().join("commits/demo__mini");
        fs::create_dir_all(&commit_dir).unwrap();
        let commit = serde_json::json!({
            "sha": sha,
            "repo": "demo/mini",
            "files": [
                {
                    "filename": "compact.js",
                    "status": "modified",
                    "before_content": minified_before,
                    "after_content": minified_after,
                },
                {
                    "filename": "pretty.js",
                    "status": "modified",
                    "before_content": pretty_before,
                    "after_content": pretty_after,
                },
            ],
        });
        fs::write(
            commit_dir.join(format!("{sha}.json")),
            serde_json::to_vec(&commit).unwrap(),
        )
        .unwrap();
        let candidate = serde_json::json!({
            "repo_full_name": "demo/mini",
            "sha": sha,
            "message": "remove console.log",
            "event_time": "2019-06-01T00:00:00Z",
            "source": "archive",
        });
        let candidates = tmp.path().join("candidates.ndjson");
        fs::write(&candidates, format!("{candidate}\n")).unwrap();
        let out_dir = tmp.path().join("out");
        fs::create_dir_all(&out_dir).unwrap();
        run(&[
            "extract",
            "--candidates",
            candidates.to_str().unwrap(),
            "--fixtures",
            tmp.path().join("commits").to_str().unwrap(),
            "--output-dir",
            out_dir.to_str().unwrap(),
        ]);

        let records = ndjson_values(&out_dir.join("records.ndjson"));
        assert_eq!(records.len(), 1, "only the pretty twin contributes");
        assert_eq!(records[0]["folderPath"], "pretty_js");
        assert_eq!(records[0]["logInString"], "console.log(v0)");
        let diagnostics = fs::read_to_string(out_dir.join("diagnostics.ndjson")).unwrap();
        assert!(
            diagnostics.contains("\"path\":\"compact.js\"")
                && diagnostics.contains("\"reason\":\"minified\""),
            "diagnostics record the skip:\n{diagnostics}"
        );
    });
}

#[test]
fn criterion_09_pipeline_reruns_are_byte_identical() {
    gate(9, "consecutive runs write byte-identical outputs", || {
        let first = TempDir::new().unwrap();
        let second = TempDir::new().unwrap();
        run_pipeline(first.path(), "1");
        run_pipeline(second.path(), "4");
        for name in [
            "candidates.ndjson",
            "records.ndjson",
            "diagnostics.ndjson",
            "corpus-report.txt",
        ] {
            let a = fs::read(first.path().join(name)).unwrap();
            let b = fs::read(second.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between runs");
            let golden = fs::read(fixture(&format!("golden/{name}"))).unwrap();
            assert_eq!(a, golden, "{name} differs from the golden copy");
        }
    });
}

#[test]
fn criterion_10_chance_corrected_agreement_oracle() {
    gate(10, "agreement statistic hits the hand-computed values", || {
        let labels = ["if", "loop", "if", "try", "loop", "switch"];
        assert_eq!(cohens_kappa(&labels, &labels).unwrap(), 1.0);

        let a = ["x", "x", "y", "y"];
        let b = ["x", "y", "x", "y"];
        assert!(cohens_kappa(&a, &b).unwrap().abs() < 1e-12);
    });
}
