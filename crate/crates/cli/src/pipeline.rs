//! The extract stage: fetch each candidate commit, gate its changed files,
//! and pull log records off the deleted lines.
//!
//! Commits are distributed over a bounded worker pool; per-commit results
//! are merged back in candidate order, so the emitted record stream is
//! identical for every parallelism degree.

use chrono::SecondsFormat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use logmine_core::ast::record::{extract_file_records, ExtractOptions, LogRecord, RecordContext};
use logmine_core::ast::{parse_source, SourceSyntax};
use logmine_core::client::{ChangedFile, RemoteClient};
use logmine_core::diff::{is_target_extension, ExclusionReason, FileDiff};
use logmine_core::ingest::CandidateCommit;

/// Before-images larger than this are skipped with a diagnostic.
pub const MAX_FILE_BYTES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diagnostic {
    /// A fetched commit and how many records it yielded. Summing `records`
    /// over these rows reproduces the total record count exactly.
    #[serde(rename_all = "camelCase")]
    Commit {
        repo: String,
        sha: String,
        records: u64,
        skipped_files: u64,
    },
    /// A changed source file that was not analyzed.
    #[serde(rename_all = "camelCase")]
    SkippedFile {
        repo: String,
        sha: String,
        path: String,
        reason: String,
    },
    /// A candidate whose commit data could not be fetched at all.
    #[serde(rename_all = "camelCase")]
    SkippedCommit {
        repo: String,
        sha: String,
        reason: String,
    },
}

#[derive(Debug, Clone)]
pub struct ExtractSettings {
    pub extended_extensions: bool,
    pub options: ExtractOptions,
    pub parallelism: usize,
}

#[derive(Debug, Default)]
pub struct ExtractOutcome {
    pub records: Vec<LogRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub commits_fetched: u64,
    pub commits_skipped: u64,
}

impl ExtractOutcome {
    pub fn skipped_files(&self) -> u64 {
        self.diagnostics
            .iter()
            .filter(|d| matches!(d, Diagnostic::SkippedFile { .. }))
            .count() as u64
    }
}

pub fn run_extract(
    candidates: &[CandidateCommit],
    client: &dyn RemoteClient,
    settings: &ExtractSettings,
) -> ExtractOutcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.parallelism)
        .build()
        .expect("worker pool");
    let per_commit: Vec<CommitOutcome> = pool.install(|| {
        candidates
            .par_iter()
            .map(|candidate| process_commit(client, candidate, settings))
            .collect()
    });
    let mut outcome = ExtractOutcome::default();
    for commit in per_commit {
        if commit.fetched {
            outcome.commits_fetched += 1;
        } else {
            outcome.commits_skipped += 1;
        }
        outcome.records.extend(commit.records);
        outcome.diagnostics.extend(commit.diagnostics);
    }
    outcome
}

struct CommitOutcome {
    records: Vec<LogRecord>,
    diagnostics: Vec<Diagnostic>,
    fetched: bool,
}

fn process_commit(
    client: &dyn RemoteClient,
    candidate: &CandidateCommit,
    settings: &ExtractSettings,
) -> CommitOutcome {
    let repo = candidate.repo_full_name.clone();
    let sha = candidate.sha.clone();
    let detail = match client.commit_detail(&repo, &sha) {
        Ok(detail) => detail,
        Err(err) => {
            return CommitOutcome {
                records: Vec::new(),
                diagnostics: vec![Diagnostic::SkippedCommit {
                    repo,
                    sha,
                    reason: err.to_string(),
                }],
                fetched: false,
            }
        }
    };
    let event_time = candidate
        .event_time
        .to_rfc3339_opts(SecondsFormat::Secs, true);

    let mut files: Vec<&ChangedFile> = detail
        .files
        .iter()
        .filter(|f| is_target_extension(&f.filename, settings.extended_extensions))
        .collect();
    files.sort_by(|a, b| a.filename.cmp(&b.filename));

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for file in files {
        match process_file(file, candidate, &event_time, settings) {
            FileOutcome::Records(mut file_records) => records.append(&mut file_records),
            FileOutcome::Skip(reason) => diagnostics.push(Diagnostic::SkippedFile {
                repo: repo.clone(),
                sha: sha.clone(),
                path: file.filename.clone(),
                reason,
            }),
            FileOutcome::Nothing => {}
        }
    }
    let skipped_files = diagnostics.len() as u64;
    diagnostics.push(Diagnostic::Commit {
        repo,
        sha,
        records: records.len() as u64,
        skipped_files,
    });
    CommitOutcome {
        records,
        diagnostics,
        fetched: true,
    }
}

enum FileOutcome {
    Records(Vec<LogRecord>),
    Skip(String),
    /// Nothing to analyze and nothing worth reporting: added files, files
    /// with no deleted lines.
    Nothing,
}

fn process_file(
    file: &ChangedFile,
    candidate: &CandidateCommit,
    event_time: &str,
    settings: &ExtractSettings,
) -> FileOutcome {
    // an added file has no before-image; nothing can have been deleted
    if file.status == "added" {
        return FileOutcome::Nothing;
    }
    let Some(before) = file.before_content.as_deref() else {
        return FileOutcome::Skip("missing before-image".to_string());
    };
    if before.len() > MAX_FILE_BYTES {
        return FileOutcome::Skip("oversize".to_string());
    }
    let diff = if let Some(after) = file.after_content.as_deref() {
        FileDiff::build(&file.filename, before, after, settings.extended_extensions)
    } else if let Some(patch) = file.patch.as_deref() {
        match FileDiff::from_patch(&file.filename, before, patch, settings.extended_extensions) {
            Ok(diff) => diff,
            Err(err) => return FileOutcome::Skip(format!("unusable patch: {err}")),
        }
    } else if file.status == "removed" {
        FileDiff::build(&file.filename, before, "", settings.extended_extensions)
    } else {
        return FileOutcome::Skip("missing diff".to_string());
    };
    if let Some(reason) = diff.excluded {
        return match reason {
            ExclusionReason::Minified => FileOutcome::Skip("minified".to_string()),
            ExclusionReason::Library => FileOutcome::Skip("library".to_string()),
            // filtered before this point; an excluded extension here means
            // the extension set changed mid-run, which cannot happen
            ExclusionReason::NonTargetExtension => FileOutcome::Nothing,
        };
    }
    if diff.deleted_lines.is_empty() {
        return FileOutcome::Nothing;
    }
    let tree = match parse_source(&diff.before_content, SourceSyntax::for_path(&file.filename)) {
        Ok(tree) => tree,
        Err(err) => return FileOutcome::Skip(format!("parse error: {err}")),
    };
    let ctx = RecordContext {
        repo_full_name: &candidate.repo_full_name,
        sha: &candidate.sha,
        file_path: &file.filename,
        event_time: Some(event_time),
    };
    FileOutcome::Records(extract_file_records(
        &tree,
        &diff.deleted_lines,
        &ctx,
        &settings.options,
    ))
}
