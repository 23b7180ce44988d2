//! Mining and static analysis of short-lived `console.log` statements:
//! find commits whose messages announce the removal of leftover debug logs,
//! recover the deleted log calls from the pre-commit sources, attach their
//! syntactic context, and aggregate the resulting record corpus.
//!
//! Pipeline stages, one module each:
//!
//! - [`ingest`]: decode push-event streams, filter removal messages,
//!   deduplicate candidate commits across sources.
//! - [`client`]: fetch commit detail through an abstract remote client with
//!   a record/replay fixture mode and rate-limit handling.
//! - [`diff`]: restrict commits to JS/TS files, drop minified and library
//!   files, compute deleted-line sets.
//! - [`ast`]: parse pre-commit sources, locate `console.log` calls on
//!   deleted lines, and build fully contextualized log records.
//! - [`semantics`]: argument-level analysis of each extracted log.
//! - [`stats`]: corpus-level aggregates, tests, and summary statistics.
//! - [`report`]: deterministic serialization of the aggregate results.

pub mod ast;
pub mod client;
pub mod diff;
pub mod ingest;
pub mod report;
pub mod semantics;
pub mod stats;
