//! Commit-detail acquisition behind a swappable client.
//!
//! Three implementations share one trait: a live HTTP client, a replay
//! client reading recorded responses from a fixture directory, and a
//! recording wrapper that captures live responses into that layout. The
//! fixture store is the only path the test suite touches; nothing here
//! requires network access at test time.
//!
//! Fixture layout: `<root>/<owner>__<name>/<sha>.json`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable holding one or more comma-separated API tokens.
pub const TOKEN_ENV_VAR: &str = "LOGMINE_TOKEN";

#[derive(Debug, Error)]
pub enum ClientError {
    /// The commit or its repository no longer resolves (deleted or made
    /// private). Callers record this and continue; it is never fatal.
    #[error("{repo}@{sha} is unavailable (deleted or private)")]
    Unavailable { repo: String, sha: String },
    /// The rate budget stayed exhausted through every retry.
    #[error("rate limited after {attempts} attempts; retry in {wait:?}")]
    RateLimited { attempts: u32, wait: Duration },
    #[error("fixture {path}: {problem}")]
    Fixture { path: String, problem: String },
    #[error("transport failure for {repo}@{sha}: {detail}")]
    Transport {
        repo: String,
        sha: String,
        detail: String,
    },
}

/// Full detail of one commit: every changed file, with whatever content
/// form the source provides (patch text and/or full before/after images).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitDetail {
    pub sha: String,
    pub repo: String,
    pub files: Vec<ChangedFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangedFile {
    pub filename: String,
    /// "modified" | "added" | "removed" | "renamed"
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before_content: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_content: Option<String>,
}

pub trait RemoteClient: Send + Sync {
    fn commit_detail(&self, repo_full_name: &str, sha: &str) -> Result<CommitDetail, ClientError>;
}

/// On-disk form of a recorded response. A tombstone (`unavailable: true`)
/// remembers that the remote answered not-found, so replay reproduces the
/// miss instead of treating it as an unrecorded commit.
#[derive(Serialize, Deserialize)]
struct FixtureRecord {
    sha: String,
    repo: String,
    #[serde(default)]
    unavailable: bool,
    #[serde(default)]
    files: Vec<ChangedFile>,
}

pub fn fixture_path(root: &Path, repo_full_name: &str, sha: &str) -> PathBuf {
    root.join(repo_full_name.replace('/', "__"))
        .join(format!("{sha}.json"))
}

/// Replays recorded responses; never touches the network.
pub struct FixtureClient {
    root: PathBuf,
}

impl FixtureClient {
    pub fn new(root: impl Into<PathBuf>) -> FixtureClient {
        FixtureClient { root: root.into() }
    }
}

impl RemoteClient for FixtureClient {
    fn commit_detail(&self, repo_full_name: &str, sha: &str) -> Result<CommitDetail, ClientError> {
        let path = fixture_path(&self.root, repo_full_name, sha);
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Err(ClientError::Unavailable {
                    repo: repo_full_name.to_string(),
                    sha: sha.to_string(),
                })
            }
            Err(e) => {
                return Err(ClientError::Fixture {
                    path: path.display().to_string(),
                    problem: e.to_string(),
                })
            }
        };
        let record: FixtureRecord =
            serde_json::from_str(&text).map_err(|e| ClientError::Fixture {
                path: path.display().to_string(),
                problem: e.to_string(),
            })?;
        if record.unavailable {
            return Err(ClientError::Unavailable {
                repo: repo_full_name.to_string(),
                sha: sha.to_string(),
            });
        }
        Ok(CommitDetail {
            sha: record.sha,
            repo: record.repo,
            files: record.files,
        })
    }
}

/// Delegates to an inner client and writes each response (or not-found
/// tombstone) into the fixture layout for later replay.
pub struct RecordingClient<C> {
    inner: C,
    root: PathBuf,
}

impl<C> RecordingClient<C> {
    pub fn new(inner: C, root: impl Into<PathBuf>) -> RecordingClient<C> {
        RecordingClient {
            inner,
            root: root.into(),
        }
    }

    fn write_record(&self, path: &Path, record: &FixtureRecord) -> Result<(), ClientError> {
        let io_err = |e: io::Error| ClientError::Fixture {
            path: path.display().to_string(),
            problem: e.to_string(),
        };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io_err)?;
        }
        let mut text = serde_json::to_string_pretty(record).expect("record serializes");
        text.push('\n');
        fs::write(path, text).map_err(io_err)
    }
}

impl<C: RemoteClient> RemoteClient for RecordingClient<C> {
    fn commit_detail(&self, repo_full_name: &str, sha: &str) -> Result<CommitDetail, ClientError> {
        let path = fixture_path(&self.root, repo_full_name, sha);
        match self.inner.commit_detail(repo_full_name, sha) {
            Ok(detail) => {
                self.write_record(
                    &path,
                    &FixtureRecord {
                        sha: detail.sha.clone(),
                        repo: detail.repo.clone(),
                        unavailable: false,
                        files: detail.files.clone(),
                    },
                )?;
                Ok(detail)
            }
            Err(ClientError::Unavailable { repo, sha }) => {
                self.write_record(
                    &path,
                    &FixtureRecord {
                        sha: sha.clone(),
                        repo: repo.clone(),
                        unavailable: true,
                        files: Vec::new(),
                    },
                )?;
                Err(ClientError::Unavailable { repo, sha })
            }
            Err(other) => Err(other),
        }
    }
}

/// Exponential backoff schedule for rate-limited calls.
#[derive(Debug, Clone, Copy)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> RetryPolicy {
        RetryPolicy {
            max_attempts: 5,
            base_delay: Duration::from_secs(1),
            max_delay: Duration::from_secs(64),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `attempt` (0-based): base * 2^attempt,
    /// capped.
    pub fn delay(&self, attempt: u32) -> Duration {
        let factor = 1u32.checked_shl(attempt).unwrap_or(u32::MAX);
        self.base_delay
            .checked_mul(factor)
            .unwrap_or(self.max_delay)
            .min(self.max_delay)
    }
}

/// Round-robin pool of API credentials shared across worker threads.
/// Rotating on every call spreads the rate budget evenly.
pub struct TokenPool {
    tokens: Vec<String>,
    next: AtomicUsize,
}

impl TokenPool {
    pub fn new(tokens: Vec<String>) -> TokenPool {
        TokenPool {
            tokens,
            next: AtomicUsize::new(0),
        }
    }

    /// Comma-separated tokens from [`TOKEN_ENV_VAR`]; empty pool if unset.
    pub fn from_env() -> TokenPool {
        let tokens = std::env::var(TOKEN_ENV_VAR)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default();
        TokenPool::new(tokens)
    }

    pub fn checkout(&self) -> Option<&str> {
        if self.tokens.is_empty() {
            return None;
        }
        let idx = self.next.fetch_add(1, Ordering::Relaxed) % self.tokens.len();
        Some(&self.tokens[idx])
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Live client for a commit API speaking the public schema
/// (`/repos/{owner}/{name}/commits/{sha}` with a `files[]` array carrying
/// `filename`/`status`/`patch`).
pub struct HttpClient {
    http: reqwest::blocking::Client,
    base_url: String,
    tokens: TokenPool,
    retry: RetryPolicy,
}

impl HttpClient {
    pub fn new(base_url: impl Into<String>, tokens: TokenPool, retry: RetryPolicy) -> HttpClient {
        let http = reqwest::blocking::Client::builder()
            .user_agent("logmine")
            .timeout(Duration::from_secs(30))
            .build()
            .expect("client construction is infallible with static options");
        HttpClient {
            http,
            base_url: base_url.into(),
            tokens,
            retry,
        }
    }

    fn get(&self, url: &str, accept: &str, repo: &str, sha: &str) -> Result<String, ClientError> {
        let transport = |detail: String| ClientError::Transport {
            repo: repo.to_string(),
            sha: sha.to_string(),
            detail,
        };
        let mut last_wait = self.retry.base_delay;
        for attempt in 0..self.retry.max_attempts {
            let mut req = self.http.get(url).header("Accept", accept);
            if let Some(token) = self.tokens.checkout() {
                req = req.bearer_auth(token);
            }
            let resp = req.send().map_err(|e| transport(e.to_string()))?;
            let status = resp.status();
            if status == reqwest::StatusCode::NOT_FOUND {
                return Err(ClientError::Unavailable {
                    repo: repo.to_string(),
                    sha: sha.to_string(),
                });
            }
            if status == reqwest::StatusCode::FORBIDDEN
                || status == reqwest::StatusCode::TOO_MANY_REQUESTS
            {
                // Prefer the server's own wait hint over the schedule.
                let wait = resp
                    .headers()
                    .get("retry-after")
                    .and_then(|v| v.to_str().ok())
                    .and_then(|v| v.parse::<u64>().ok())
                    .map(Duration::from_secs)
                    .unwrap_or_else(|| self.retry.delay(attempt));
                last_wait = wait;
                if attempt + 1 < self.retry.max_attempts {
                    std::thread::sleep(wait);
                    continue;
                }
                break;
            }
            if !status.is_success() {
                return Err(transport(format!("unexpected status {status}")));
            }
            return resp.text().map_err(|e| transport(e.to_string()));
        }
        Err(ClientError::RateLimited {
            attempts: self.retry.max_attempts,
            wait: last_wait,
        })
    }
}

#[derive(Deserialize)]
struct ApiCommit {
    sha: String,
    #[serde(default)]
    parents: Vec<ApiParent>,
    #[serde(default)]
    files: Vec<ApiFile>,
}

#[derive(Deserialize)]
struct ApiParent {
    sha: String,
}

#[derive(Deserialize)]
struct ApiFile {
    filename: String,
    status: String,
    #[serde(default)]
    patch: Option<String>,
}

impl RemoteClient for HttpClient {
    fn commit_detail(&self, repo_full_name: &str, sha: &str) -> Result<CommitDetail, ClientError> {
        let url = format!("{}/repos/{}/commits/{}", self.base_url, repo_full_name, sha);
        let body = self.get(&url, "application/vnd.github+json", repo_full_name, sha)?;
        let api: ApiCommit = serde_json::from_str(&body).map_err(|e| ClientError::Transport {
            repo: repo_full_name.to_string(),
            sha: sha.to_string(),
            detail: format!("commit decode: {e}"),
        })?;
        let parent = api.parents.first().map(|p| p.sha.clone());

        let mut files = Vec::with_capacity(api.files.len());
        for f in api.files {
            // The pre-commit image exists only for files that existed
            // before; fetch it raw from the parent tree.
            let before_content = match (parent.as_deref(), f.status.as_str()) {
                (Some(parent), "modified" | "removed" | "renamed")
                    if crate::diff::is_target_extension(&f.filename, true) =>
                {
                    let url = format!(
                        "{}/repos/{}/contents/{}?ref={}",
                        self.base_url, repo_full_name, f.filename, parent
                    );
                    match self.get(&url, "application/vnd.github.raw", repo_full_name, sha) {
                        Ok(text) => Some(text),
                        Err(ClientError::Unavailable { .. }) => None,
                        Err(e) => return Err(e),
                    }
                }
                _ => None,
            };
            files.push(ChangedFile {
                filename: f.filename,
                status: f.status,
                patch: f.patch,
                before_content,
                after_content: None,
            });
        }
        Ok(CommitDetail {
            sha: api.sha,
            repo: repo_full_name.to_string(),
            files,
        })
    }
}
