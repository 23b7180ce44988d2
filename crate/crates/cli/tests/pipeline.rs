//! Subcommand contract tests: exit codes, partial-skip behavior, config
//! merging, and output shape, all against temp directories.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logmine_core::ast::record::{write_records, LocPoint, LogArgument, LogLoc, LogRecord};
use serde_json::{json, Value};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_logmine");

fn logmine(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn pipeline binary")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn assert_code(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout_of(output),
        stderr_of(output)
    );
}

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/acceptance")
        .join(path)
}

fn write_commit_fixture(root: &Path, repo: &str, sha: &str, files: Value) {
    let dir = root.join(repo.replace('/', "__"));
    fs::create_dir_all(&dir).unwrap();
    let record = json!({ "sha": sha, "repo": repo, "files": files });
    fs::write(
        dir.join(format!("{sha}.json")),
        serde_json::to_vec(&record).unwrap(),
    )
    .unwrap();
}

fn write_candidate(path: &Path, repo: &str, sha: &str) {
    let line = json!({
        "repo_full_name": repo,
        "sha": sha,
        "message": "remove console.log",
        "event_time": "2020-02-02T02:02:02Z",
        "source": "archive",
    });
    let mut text = fs::read_to_string(path).unwrap_or_default();
    text.push_str(&line.to_string());
    text.push('\n');
    fs::write(path, text).unwrap();
}

#[test]
fn filter_events_empty_input_writes_empty_candidates() {
    let tmp = TempDir::new().unwrap();
    let events = tmp.path().join("empty.json");
    fs::write(&events, "").unwrap();
    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "filter-events",
        "--input",
        events.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.contains("lines read: 0"), "{stdout}");
    assert!(stdout.contains("candidates after dedupe: 0"), "{stdout}");
    assert_eq!(fs::read_to_string(out_dir.join("candidates.ndjson")).unwrap(), "");
}

#[test]
fn missing_event_file_exits_two() {
    let tmp = TempDir::new().unwrap();
    let output = logmine(&[
        "filter-events",
        "--input",
        tmp.path().join("absent.json").to_str().unwrap(),
        "--output-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&output, 2);
    assert!(stderr_of(&output).starts_with("error: "), "{}", stderr_of(&output));
}

#[test]
fn corrupt_and_missing_fixtures_skip_their_commits() {
    let tmp = TempDir::new().unwrap();
    let candidates = tmp.path().join("candidates.ndjson");
    let corrupt_sha = "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
    let missing_sha = "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb";
    write_candidate(&candidates, "demo/skips", corrupt_sha);
    write_candidate(&candidates, "demo/skips", missing_sha);
    let commits = tmp.path().join("commits");
    fs::create_dir_all(commits.join("demo__skips")).unwrap();
    fs::write(
        commits.join("demo__skips").join(format!("{corrupt_sha}.json")),
        "{not json",
    )
    .unwrap();

    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.contains("commits skipped: 2"), "{stdout}");
    assert!(stdout.contains("records: 0"), "{stdout}");
    assert_eq!(fs::read_to_string(out_dir.join("records.ndjson")).unwrap(), "");
    let diagnostics = fs::read_to_string(out_dir.join("diagnostics.ndjson")).unwrap();
    let kinds: Vec<Value> = diagnostics
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(kinds.len(), 2, "{diagnostics}");
    assert!(kinds.iter().all(|d| d["kind"] == "skipped-commit"), "{diagnostics}");
}

#[test]
fn commit_with_no_source_changes_yields_zero_records() {
    let tmp = TempDir::new().unwrap();
    let candidates = tmp.path().join("candidates.ndjson");
    let sha = "cccccccccccccccccccccccccccccccccccccccc";
    write_candidate(&candidates, "demo/docs", sha);
    let commits = tmp.path().join("commits");
    write_commit_fixture(
        &commits,
        "demo/docs",
        sha,
        json!([{
            "filename": "README.md",
            "status": "modified",
            "before_content": "# a\nconsole.log here once\n",
            "after_content": "# a\n",
        }]),
    );

    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    assert!(stdout_of(&output).contains("records: 0"));
    let diagnostics = fs::read_to_string(out_dir.join("diagnostics.ndjson")).unwrap();
    let row: Value = serde_json::from_str(diagnostics.lines().next().unwrap()).unwrap();
    assert_eq!(row["kind"], "commit");
    assert_eq!(row["records"], 0);
    assert_eq!(row["skippedFiles"], 0);
}

#[test]
fn parse_error_and_oversize_files_skip_but_others_extract() {
    let tmp = TempDir::new().unwrap();
    let candidates = tmp.path().join("candidates.ndjson");
    let sha = "dddddddddddddddddddddddddddddddddddddddd";
    write_candidate(&candidates, "demo/mixed", sha);

    let filler = "var filler = 1;\n".repeat(330_000);
    assert!(filler.len() > 5_000_000);
    let commits = tmp.path().join("commits");
    write_commit_fixture(
        &commits,
        "demo/mixed",
        sha,
        json!([
            {
                "filename": "good.js",
                "status": "modified",
                "before_content": "function f() {\n  console.log(1);\n}\n",
                "after_content": "function f() {\n}\n",
            },
            {
                "filename": "broken.js",
                "status": "modified",
                "before_content": "var ok = 1;\nconsole.log(ok;\n",
                "after_content": "var ok = 1;\n",
            },
            {
                "filename": "huge.js",
                "status": "modified",
                "before_content": format!("{filler}console.log(9);\n"),
                "after_content": filler,
            },
        ]),
    );

    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.contains("records: 1"), "{stdout}");
    assert!(stdout.contains("files skipped: 2"), "{stdout}");

    let records = fs::read_to_string(out_dir.join("records.ndjson")).unwrap();
    let record: Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
    assert_eq!(record["folderPath"], "good_js");

    let diagnostics = fs::read_to_string(out_dir.join("diagnostics.ndjson")).unwrap();
    let rows: Vec<Value> = diagnostics
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let reason_of = |path: &str| -> String {
        rows.iter()
            .find(|r| r["path"] == path)
            .unwrap_or_else(|| panic!("no diagnostic for {path}:\n{diagnostics}"))["reason"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert!(reason_of("broken.js").starts_with("parse error"), "{diagnostics}");
    assert_eq!(reason_of("huge.js"), "oversize");
    let commit_row = rows.iter().find(|r| r["kind"] == "commit").unwrap();
    assert_eq!(commit_row["records"], 1);
    assert_eq!(commit_row["skippedFiles"], 2);
}

#[test]
fn record_total_matches_the_per_commit_diagnostics() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().to_str().unwrap();
    let run = |args: &[&str]| {
        let output = logmine(args);
        assert_code(&output, 0);
    };
    run(&[
        "filter-events",
        "--input",
        fixture("events/2019-05-01-12.json").to_str().unwrap(),
        "--output-dir",
        out,
    ]);
    run(&[
        "extract",
        "--candidates",
        tmp.path().join("candidates.ndjson").to_str().unwrap(),
        "--fixtures",
        fixture("commits").to_str().unwrap(),
        "--output-dir",
        out,
    ]);
    let records = fs::read_to_string(tmp.path().join("records.ndjson")).unwrap();
    let diagnostics = fs::read_to_string(tmp.path().join("diagnostics.ndjson")).unwrap();
    let from_commits: u64 = diagnostics
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|d| d["kind"] == "commit")
        .map(|d| d["records"].as_u64().unwrap())
        .sum();
    assert_eq!(records.lines().count() as u64, from_commits);
}

#[test]
fn analyze_empty_record_file_writes_a_zeroed_report() {
    let tmp = TempDir::new().unwrap();
    let records = tmp.path().join("records.ndjson");
    fs::write(&records, "").unwrap();
    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "analyze",
        "--records",
        records.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    assert!(stdout_of(&output).contains("records: 0"));
    let report = fs::read_to_string(out_dir.join("corpus-report.txt")).unwrap();
    assert!(report.contains("records: 0"), "{report}");
    assert!(report.contains("(no data)"), "{report}");
}

fn bare_record(event_time: Option<&str>) -> LogRecord {
    LogRecord {
        log_in_string: "console.log(\"up\")".into(),
        function_name: "boot".into(),
        function_type: "FunctionDeclaration".into(),
        log_loc: LogLoc {
            start: LocPoint { line: 2, column: 2 },
            end: LocPoint { line: 2, column: 19 },
        },
        complexity_of_function: None,
        arguments: vec![LogArgument {
            str: "\"up\"".into(),
            type_of_arg: "Literal".into(),
        }],
        is_async_function: false,
        is_callback_function: false,
        is_anonymous_function: false,
        block_statement: "FunctionDeclaration".into(),
        callback_callee_name: None,
        repository_name: "demo_app".into(),
        commit_sha: "e".repeat(40),
        folder_path: "index_js".into(),
        event_time: event_time.map(str::to_string),
    }
}

#[test]
fn analyze_records_without_timestamps_has_no_monthly_series() {
    let tmp = TempDir::new().unwrap();
    let records_path = tmp.path().join("records.ndjson");
    let mut buf = Vec::new();
    write_records(&mut buf, &[bare_record(None), bare_record(None)]).unwrap();
    fs::write(&records_path, buf).unwrap();

    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "analyze",
        "--records",
        records_path.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let report = fs::read_to_string(out_dir.join("corpus-report.txt")).unwrap();
    let monthly = report
        .split("async share by month")
        .nth(1)
        .expect("monthly section present");
    assert!(monthly.trim_start().starts_with("(no data)"), "{report}");
}

#[test]
fn analyze_csv_flag_exports_one_file_per_table() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "analyze",
        "--records",
        fixture("golden/records.ndjson").to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
        "--csv",
    ]);
    assert_code(&output, 0);
    let blocks = fs::read_to_string(out_dir.join("csv/blocks.csv")).unwrap();
    assert!(blocks.starts_with("block,count,share\n"), "{blocks}");
    assert!(blocks.contains("FunctionDeclaration,1,0.500000"), "{blocks}");
    for name in [
        "function_types",
        "flag_intersections",
        "argument_counts",
        "labels",
        "monthly_async",
    ] {
        assert!(
            out_dir.join(format!("csv/{name}.csv")).is_file(),
            "missing {name}.csv"
        );
    }
}

#[test]
fn baseline_with_no_parseable_files_exits_three() {
    let tmp = TempDir::new().unwrap();
    let corpus = tmp.path().join("corpus");
    fs::create_dir_all(&corpus).unwrap();
    fs::write(corpus.join("broken.js"), "function (((\n").unwrap();
    let output = logmine(&[
        "baseline",
        "--corpus",
        corpus.to_str().unwrap(),
        "--output-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&output, 3);
}

#[test]
fn baseline_counts_the_parseable_subset_and_reports_skips() {
    let tmp = TempDir::new().unwrap();
    let corpus = tmp.path().join("corpus");
    fs::create_dir_all(&corpus).unwrap();
    fs::write(
        corpus.join("good.js"),
        "function f() { return 1; }\nconst g = () => 2;\n",
    )
    .unwrap();
    fs::write(corpus.join("broken.js"), "function (((\n").unwrap();
    fs::write(corpus.join("notes.txt"), "not source\n").unwrap();

    let out_dir = tmp.path().join("out");
    let output = logmine(&[
        "baseline",
        "--corpus",
        corpus.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.contains("skipped"), "{stdout}");
    let report = fs::read_to_string(out_dir.join("baseline.txt")).unwrap();
    assert!(report.contains("files parsed: 1"), "{report}");
    assert!(report.contains("files skipped: 1"), "{report}");
    assert!(report.contains("functions"), "{report}");
}

#[test]
fn baseline_missing_corpus_directory_exits_two() {
    let tmp = TempDir::new().unwrap();
    let output = logmine(&[
        "baseline",
        "--corpus",
        tmp.path().join("nowhere").to_str().unwrap(),
        "--output-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&output, 2);
}

#[test]
fn output_dir_colliding_with_an_input_path_exits_two() {
    let tmp = TempDir::new().unwrap();
    let candidates = tmp.path().join("candidates.ndjson");
    fs::write(&candidates, "").unwrap();
    let commits = tmp.path().join("commits");
    fs::create_dir_all(&commits).unwrap();
    let output = logmine(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        commits.to_str().unwrap(),
    ]);
    assert_code(&output, 2);
}

#[test]
fn parallelism_zero_exits_two() {
    let tmp = TempDir::new().unwrap();
    let candidates = tmp.path().join("candidates.ndjson");
    fs::write(&candidates, "").unwrap();
    let commits = tmp.path().join("commits");
    fs::create_dir_all(&commits).unwrap();
    let output = logmine(&[
        "extract",
        "--candidates",
        candidates.to_str().unwrap(),
        "--fixtures",
        commits.to_str().unwrap(),
        "--output-dir",
        tmp.path().join("out").to_str().unwrap(),
        "--parallelism",
        "0",
    ]);
    assert_code(&output, 2);
}

#[test]
fn config_file_supplies_paths_and_flags_override_it() {
    let tmp = TempDir::new().unwrap();
    let dir_a = tmp.path().join("a");
    let dir_b = tmp.path().join("b");
    let config = tmp.path().join("logmine.toml");
    fs::write(
        &config,
        format!(
            "records = {:?}\noutput-dir = {:?}\n",
            fixture("golden/records.ndjson"),
            dir_a
        ),
    )
    .unwrap();

    let output = logmine(&["analyze", "--config", config.to_str().unwrap()]);
    assert_code(&output, 0);
    assert!(dir_a.join("corpus-report.txt").is_file());

    let output = logmine(&[
        "analyze",
        "--config",
        config.to_str().unwrap(),
        "--output-dir",
        dir_b.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    assert!(dir_b.join("corpus-report.txt").is_file());
    assert_eq!(
        fs::read(dir_a.join("corpus-report.txt")).unwrap(),
        fs::read(dir_b.join("corpus-report.txt")).unwrap()
    );
}

#[test]
fn unknown_config_key_exits_two() {
    let tmp = TempDir::new().unwrap();
    let config = tmp.path().join("logmine.toml");
    fs::write(&config, "recordz = \"oops.ndjson\"\n").unwrap();
    let output = logmine(&[
        "analyze",
        "--config",
        config.to_str().unwrap(),
        "--output-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&output, 2);
}

#[test]
fn repo_report_is_deterministic_and_validates_query_date() {
    let tmp = TempDir::new().unwrap();
    let metadata = tmp.path().join("repos.ndjson");
    let rows = [
        json!({
            "full_name": "demo/webapp",
            "description": "sample",
            "contributors": 4,
            "stars": 120,
            "forks_count": 11,
            "watchers_count": 120,
            "size": 2048,
            "lastUpdated": "2019-04-20T10:00:00Z",
            "isActive": true,
        }),
        json!({
            "full_name": "demo/mini",
            "contributors": 1,
            "stars": 3,
            "forks_count": 0,
            "watchers_count": 3,
            "size": 64,
            "lastUpdated": "2018-01-05T08:30:00Z",
            "isActive": false,
        }),
    ];
    let text: String = rows.iter().map(|r| format!("{r}\n")).collect();
    fs::write(&metadata, text).unwrap();

    let dir_a = tmp.path().join("a");
    let dir_b = tmp.path().join("b");
    for dir in [&dir_a, &dir_b] {
        let output = logmine(&[
            "report",
            "--metadata",
            metadata.to_str().unwrap(),
            "--output-dir",
            dir.to_str().unwrap(),
        ]);
        assert_code(&output, 0);
    }
    let doc = fs::read_to_string(dir_a.join("repo-report.txt")).unwrap();
    assert!(doc.contains("repositories: 2"), "{doc}");
    assert_eq!(
        fs::read(dir_a.join("repo-report.txt")).unwrap(),
        fs::read(dir_b.join("repo-report.txt")).unwrap()
    );

    let output = logmine(&[
        "report",
        "--metadata",
        metadata.to_str().unwrap(),
        "--output-dir",
        tmp.path().join("c").to_str().unwrap(),
        "--query-date",
        "2019-05-01",
    ]);
    assert_code(&output, 0);

    let output = logmine(&[
        "report",
        "--metadata",
        metadata.to_str().unwrap(),
        "--output-dir",
        tmp.path().join("d").to_str().unwrap(),
        "--query-date",
        "not-a-date",
    ]);
    assert_code(&output, 2);
}
