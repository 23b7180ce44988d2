//! Push-event decoding and candidate-commit selection.
//!
//! Input is the public archive's newline-delimited event format: one JSON
//! object per line with `type`, `repo.name`, `created_at`, and for push
//! events `payload.commits[]`. Decoding is tolerant line by line (a bad
//! line is counted, never aborts the stream) but strict about stream-level
//! read failures.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::OnceLock;

use chrono::{DateTime, Duration, Utc};
use flate2::read::MultiGzDecoder;
use indexmap::IndexMap;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("read failure at byte offset {offset}: {source}")]
    Read {
        offset: u64,
        #[source]
        source: io::Error,
    },
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {source}")]
    Decode {
        line: u64,
        #[source]
        source: serde_json::Error,
    },
    #[error("query date {query_date} precedes last update {last_updated}")]
    QueryDateBeforeUpdate {
        last_updated: DateTime<Utc>,
        query_date: DateTime<Utc>,
    },
}

/// One push event: a repository, a push timestamp, and the pushed commits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushEvent {
    pub repo_full_name: String,
    pub pushed_at: DateTime<Utc>,
    pub commits: Vec<PushedCommit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushedCommit {
    pub sha: String,
    pub message: String,
}

/// Where a candidate commit was first seen. Order matters: duplicate
/// resolution keeps the earliest variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSource {
    Archive,
    QuerySample,
    Local,
}

/// A commit whose message indicates removal of leftover logging.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCommit {
    pub repo_full_name: String,
    pub sha: String,
    pub message: String,
    pub event_time: DateTime<Utc>,
    pub source: CandidateSource,
}

/// Repository descriptors and activity metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepoMetadata {
    pub full_name: String,
    #[serde(default)]
    pub description: String,
    pub contributors: u64,
    pub stars: u64,
    pub forks_count: u64,
    pub watchers_count: u64,
    /// Repository size in kilobytes.
    pub size: u64,
    #[serde(rename = "lastUpdated")]
    pub last_updated: DateTime<Utc>,
    #[serde(rename = "isActive")]
    pub is_active: bool,
}

/// Decoded push events plus per-stream counters for diagnostics.
#[derive(Debug, Default)]
pub struct EventBatch {
    pub events: Vec<PushEvent>,
    pub lines_read: u64,
    pub malformed_lines: u64,
    pub non_push_events: u64,
}

#[derive(Deserialize)]
struct RawEventType {
    #[serde(rename = "type")]
    kind: String,
}

#[derive(Deserialize)]
struct RawPushEvent {
    repo: RawRepo,
    payload: RawPayload,
    created_at: DateTime<Utc>,
}

#[derive(Deserialize)]
struct RawRepo {
    name: String,
}

#[derive(Deserialize)]
struct RawPayload {
    #[serde(default)]
    commits: Vec<RawCommit>,
}

#[derive(Deserialize)]
struct RawCommit {
    sha: String,
    message: String,
}

/// Decodes newline-delimited events, keeping only push events in input
/// order. Lines that fail to decode or validate are counted and skipped.
pub fn parse_event_stream<R: BufRead>(mut reader: R) -> Result<EventBatch, IngestError> {
    let mut batch = EventBatch::default();
    let mut offset = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader
            .read_line(&mut line)
            .map_err(|source| IngestError::Read { offset, source })?;
        if n == 0 {
            return Ok(batch);
        }
        offset += n as u64;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        batch.lines_read += 1;
        let Ok(header) = serde_json::from_str::<RawEventType>(trimmed) else {
            batch.malformed_lines += 1;
            continue;
        };
        if header.kind != "PushEvent" {
            batch.non_push_events += 1;
            continue;
        }
        match serde_json::from_str::<RawPushEvent>(trimmed)
            .ok()
            .and_then(validate_push)
        {
            Some(event) => batch.events.push(event),
            None => batch.malformed_lines += 1,
        }
    }
}

fn validate_push(raw: RawPushEvent) -> Option<PushEvent> {
    if raw.repo.name.matches('/').count() != 1 {
        return None;
    }
    let mut commits = Vec::with_capacity(raw.payload.commits.len());
    for c in raw.payload.commits {
        let sha = c.sha.to_ascii_lowercase();
        if sha.len() != 40 || !sha.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        commits.push(PushedCommit {
            sha,
            message: c.message,
        });
    }
    Some(PushEvent {
        repo_full_name: raw.repo.name,
        pushed_at: raw.created_at,
        commits,
    })
}

/// Opens an event file, transparently decompressing gzip (sniffed by magic
/// number, not file name).
pub fn open_event_reader(path: &Path) -> Result<Box<dyn BufRead>, IngestError> {
    let open_err = |source| IngestError::Open {
        path: path.display().to_string(),
        source,
    };
    let mut file = File::open(path).map_err(open_err)?;
    let mut magic = [0u8; 2];
    let got = file.read(&mut magic).map_err(open_err)?;
    file.seek(SeekFrom::Start(0)).map_err(open_err)?;
    if got == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Options for the removal-message pattern.
///
/// The pattern itself is fixed: `(remove|delete).*?console\.log`. By
/// default it is case-insensitive and the wildcard does not cross line
/// breaks; both choices can be flipped.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchOptions {
    pub case_sensitive: bool,
    pub across_lines: bool,
}

pub struct RemovalMatcher {
    regex: Regex,
}

impl RemovalMatcher {
    pub fn new(options: MatchOptions) -> RemovalMatcher {
        let mut pattern = String::new();
        if !options.case_sensitive {
            pattern.push_str("(?i)");
        }
        if options.across_lines {
            pattern.push_str("(?s)");
        }
        pattern.push_str(r"(remove|delete).*?console\.log");
        RemovalMatcher {
            regex: Regex::new(&pattern).expect("pattern is fixed and valid"),
        }
    }

    pub fn matches(&self, message: &str) -> bool {
        self.regex.is_match(message)
    }
}

/// Default-option removal check: case-insensitive, within a line.
pub fn match_removal_message(message: &str) -> bool {
    static DEFAULT: OnceLock<RemovalMatcher> = OnceLock::new();
    DEFAULT
        .get_or_init(|| RemovalMatcher::new(MatchOptions::default()))
        .matches(message)
}

/// Turns push events into candidate commits via the removal matcher.
/// `first_commit_only` mirrors sources that sample one commit per push.
pub fn extract_candidates(
    events: &[PushEvent],
    matcher: &RemovalMatcher,
    first_commit_only: bool,
    source: CandidateSource,
) -> Vec<CandidateCommit> {
    let mut out = Vec::new();
    for event in events {
        let commits: &[PushedCommit] = if first_commit_only {
            &event.commits[..event.commits.len().min(1)]
        } else {
            &event.commits
        };
        for commit in commits {
            if matcher.matches(&commit.message) {
                out.push(CandidateCommit {
                    repo_full_name: event.repo_full_name.clone(),
                    sha: commit.sha.clone(),
                    message: commit.message.clone(),
                    event_time: event.pushed_at,
                    source,
                });
            }
        }
    }
    out
}

/// Collapses duplicate (repo, sha) pairs. The survivor keeps its first
/// occurrence position; among duplicates the record whose source is
/// earliest in {archive, query-sample, local} is retained.
pub fn dedupe_candidates(candidates: Vec<CandidateCommit>) -> Vec<CandidateCommit> {
    let mut map: IndexMap<(String, String), CandidateCommit> =
        IndexMap::with_capacity(candidates.len());
    for candidate in candidates {
        let key = (candidate.repo_full_name.clone(), candidate.sha.clone());
        match map.entry(key) {
            indexmap::map::Entry::Occupied(mut slot) => {
                if candidate.source < slot.get().source {
                    slot.insert(candidate);
                }
            }
            indexmap::map::Entry::Vacant(slot) => {
                slot.insert(candidate);
            }
        }
    }
    map.into_values().collect()
}

/// Whether a repository counts as actively maintained at `query_date`:
/// last update at most 183 days earlier.
pub fn compute_is_active(
    last_updated: DateTime<Utc>,
    query_date: DateTime<Utc>,
) -> Result<bool, IngestError> {
    if query_date < last_updated {
        return Err(IngestError::QueryDateBeforeUpdate {
            last_updated,
            query_date,
        });
    }
    Ok(query_date - last_updated <= Duration::days(183))
}

/// Writes candidates as newline-delimited JSON.
pub fn write_candidates<W: Write>(mut writer: W, candidates: &[CandidateCommit]) -> io::Result<()> {
    for candidate in candidates {
        serde_json::to_writer(&mut writer, candidate)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_candidates<R: BufRead>(reader: R) -> Result<Vec<CandidateCommit>, IngestError> {
    read_ndjson(reader)
}

pub fn read_repo_metadata<R: BufRead>(reader: R) -> Result<Vec<RepoMetadata>, IngestError> {
    read_ndjson(reader)
}

fn read_ndjson<R: BufRead, T: serde::de::DeserializeOwned>(
    reader: R,
) -> Result<Vec<T>, IngestError> {
    let mut out = Vec::new();
    let mut offset = 0u64;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IngestError::Read { offset, source })?;
        offset += line.len() as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| IngestError::Decode {
                line: idx as u64 + 1,
                source,
            })?,
        );
    }
    Ok(out)
}
