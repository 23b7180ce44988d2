//! One function per subcommand. Each takes fully resolved settings (flags
//! already merged over the config file) and reports progress on stdout.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, Utc};

use logmine_core::ast::record::{read_records, write_records};
use logmine_core::ast::{parse_source, SourceSyntax};
use logmine_core::client::FixtureClient;
use logmine_core::diff::is_target_extension;
use logmine_core::ingest::{
    dedupe_candidates, extract_candidates, open_event_reader, parse_event_stream, read_candidates,
    read_repo_metadata, write_candidates, CandidateSource, MatchOptions, RemovalMatcher,
};
use logmine_core::report::{BaselineReport, CorpusReport, RepoReport, ReportTable};
use logmine_core::stats::baseline_function_distribution;

use crate::error::CliError;
use crate::pipeline::{run_extract, ExtractSettings};

pub struct FilterEventsSettings {
    pub inputs: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub case_sensitive: bool,
    pub match_across_lines: bool,
    pub first_commit_only: bool,
    pub source: CandidateSource,
}

pub fn cmd_filter_events(s: &FilterEventsSettings) -> Result<(), CliError> {
    let matcher = RemovalMatcher::new(MatchOptions {
        case_sensitive: s.case_sensitive,
        across_lines: s.match_across_lines,
    });
    let mut events = Vec::new();
    let (mut lines, mut malformed, mut non_push) = (0u64, 0u64, 0u64);
    for path in &s.inputs {
        let reader = open_event_reader(path).map_err(|e| CliError::input(e.to_string()))?;
        let batch = parse_event_stream(reader)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        lines += batch.lines_read;
        malformed += batch.malformed_lines;
        non_push += batch.non_push_events;
        events.extend(batch.events);
    }
    let matched = extract_candidates(&events, &matcher, s.first_commit_only, s.source);
    let matched_count = matched.len();
    let deduped = dedupe_candidates(matched);

    create_output_dir(&s.output_dir)?;
    let out_path = s.output_dir.join("candidates.ndjson");
    let mut buf = Vec::new();
    write_candidates(&mut buf, &deduped)
        .map_err(|e| CliError::general(format!("serializing candidates: {e}")))?;
    write_file(&out_path, &buf)?;

    println!("lines read: {lines}");
    println!("malformed lines: {malformed}");
    println!("non-push events: {non_push}");
    println!("push events: {}", events.len());
    println!("matched commits: {matched_count}");
    println!("candidates after dedupe: {}", deduped.len());
    println!("wrote {}", out_path.display());
    Ok(())
}

pub struct ExtractCmdSettings {
    pub candidates: PathBuf,
    pub fixtures: PathBuf,
    pub output_dir: PathBuf,
    pub extract: ExtractSettings,
}

pub fn cmd_extract(s: &ExtractCmdSettings) -> Result<(), CliError> {
    let file = File::open(&s.candidates)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", s.candidates.display())))?;
    let candidates = read_candidates(BufReader::new(file))
        .map_err(|e| CliError::input(format!("{}: {e}", s.candidates.display())))?;

    let client = FixtureClient::new(&s.fixtures);
    let outcome = run_extract(&candidates, &client, &s.extract);

    create_output_dir(&s.output_dir)?;
    let records_path = s.output_dir.join("records.ndjson");
    let mut buf = Vec::new();
    write_records(&mut buf, &outcome.records)
        .map_err(|e| CliError::general(format!("serializing records: {e}")))?;
    write_file(&records_path, &buf)?;

    let diagnostics_path = s.output_dir.join("diagnostics.ndjson");
    let mut buf = String::new();
    for diagnostic in &outcome.diagnostics {
        buf.push_str(
            &serde_json::to_string(diagnostic)
                .map_err(|e| CliError::general(format!("serializing diagnostics: {e}")))?,
        );
        buf.push('\n');
    }
    write_file(&diagnostics_path, buf.as_bytes())?;

    println!("candidates: {}", candidates.len());
    println!("commits fetched: {}", outcome.commits_fetched);
    println!("commits skipped: {}", outcome.commits_skipped);
    println!("files skipped: {}", outcome.skipped_files());
    println!("records: {}", outcome.records.len());
    println!("wrote {}", records_path.display());
    println!("wrote {}", diagnostics_path.display());
    Ok(())
}

pub struct AnalyzeSettings {
    pub records: PathBuf,
    pub output_dir: PathBuf,
    pub csv: bool,
}

pub fn cmd_analyze(s: &AnalyzeSettings) -> Result<(), CliError> {
    let file = File::open(&s.records)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", s.records.display())))?;
    let records = read_records(BufReader::new(file))
        .map_err(|e| CliError::input(format!("{}: {e}", s.records.display())))?;

    let report = CorpusReport::build(&records);
    create_output_dir(&s.output_dir)?;
    let report_path = s.output_dir.join("corpus-report.txt");
    write_file(&report_path, report.render().as_bytes())?;
    if s.csv {
        write_csv_tables(&s.output_dir.join("csv"), &report.tables())?;
    }
    println!("records: {}", report.total_records);
    println!("wrote {}", report_path.display());
    Ok(())
}

pub struct BaselineSettings {
    pub corpus: PathBuf,
    pub output_dir: PathBuf,
    pub extended_extensions: bool,
}

pub fn cmd_baseline(s: &BaselineSettings) -> Result<(), CliError> {
    if !s.corpus.is_dir() {
        return Err(CliError::input(format!(
            "corpus directory {} does not exist",
            s.corpus.display()
        )));
    }
    let files = collect_source_files(&s.corpus, s.extended_extensions)?;
    let mut trees = Vec::new();
    let mut skipped = 0u64;
    for path in &files {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => {
                println!("skipped {}: {err}", path.display());
                skipped += 1;
                continue;
            }
        };
        match parse_source(&text, SourceSyntax::for_path(&path.to_string_lossy())) {
            Ok(tree) => trees.push(tree),
            Err(err) => {
                println!("skipped {}: {err}", path.display());
                skipped += 1;
            }
        }
    }
    if trees.is_empty() {
        return Err(CliError::empty_corpus(format!(
            "no parseable source files under {}",
            s.corpus.display()
        )));
    }
    let report = BaselineReport {
        files_parsed: trees.len() as u64,
        files_skipped: skipped,
        counts: baseline_function_distribution(trees.iter()),
    };
    create_output_dir(&s.output_dir)?;
    let report_path = s.output_dir.join("baseline.txt");
    let doc = report.render();
    write_file(&report_path, doc.as_bytes())?;
    print!("{doc}");
    println!("wrote {}", report_path.display());
    Ok(())
}

pub struct ReportSettings {
    pub metadata: PathBuf,
    pub output_dir: PathBuf,
    pub query_date: Option<DateTime<Utc>>,
    pub csv: bool,
}

pub fn cmd_report(s: &ReportSettings) -> Result<(), CliError> {
    let file = File::open(&s.metadata)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", s.metadata.display())))?;
    let repos = read_repo_metadata(BufReader::new(file))
        .map_err(|e| CliError::input(format!("{}: {e}", s.metadata.display())))?;

    // without an explicit anchor the newest update is "now"; never the
    // wall clock, which would break rerun byte-identity
    let query_date = s
        .query_date
        .or_else(|| repos.iter().map(|r| r.last_updated).max())
        .unwrap_or(DateTime::UNIX_EPOCH);
    let report =
        RepoReport::build(&repos, query_date).map_err(|e| CliError::input(e.to_string()))?;

    create_output_dir(&s.output_dir)?;
    let report_path = s.output_dir.join("repo-report.txt");
    let doc = report.render();
    write_file(&report_path, doc.as_bytes())?;
    if s.csv {
        write_csv_tables(&s.output_dir.join("csv"), &report.tables())?;
    }
    print!("{doc}");
    println!("wrote {}", report_path.display());
    Ok(())
}

/// Accepts a full RFC 3339 timestamp or a bare date (midnight UTC).
pub fn parse_query_date(text: &str) -> Result<DateTime<Utc>, CliError> {
    if let Ok(at) = text.parse::<DateTime<Utc>>() {
        return Ok(at);
    }
    if let Ok(date) = text.parse::<NaiveDate>() {
        if let Some(at) = date.and_hms_opt(0, 0, 0) {
            return Ok(at.and_utc());
        }
    }
    Err(CliError::input(format!(
        "cannot parse query date {text:?}; use YYYY-MM-DD or RFC 3339"
    )))
}

/// Every analyzable source file under `root`, in sorted order.
fn collect_source_files(root: &Path, extended: bool) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let entries = fs::read_dir(&dir)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", dir.display())))?
                .path();
            if path.is_dir() {
                stack.push(path);
            } else if is_target_extension(&path.to_string_lossy(), extended) {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn create_output_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| {
        CliError::general(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::general(format!("cannot write {}: {e}", path.display())))
}

fn write_csv_tables(dir: &Path, tables: &[ReportTable]) -> Result<(), CliError> {
    create_output_dir(dir)?;
    for table in tables {
        let path = dir.join(format!("{}.csv", table.name));
        let csv_err =
            |e: csv::Error| CliError::general(format!("cannot write {}: {e}", path.display()));
        let mut writer = csv::Writer::from_path(&path)
            .map_err(|e| CliError::general(format!("cannot write {}: {e}", path.display())))?;
        writer.write_record(&table.header).map_err(csv_err)?;
        for row in &table.rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        writer
            .flush()
            .map_err(|e| CliError::general(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
