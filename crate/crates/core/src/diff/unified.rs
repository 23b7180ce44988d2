//! Unified-diff hunk text, in the header dialect commit APIs serve: hunks
//! only, no `---`/`+++` preamble required (one is skipped if present).
//!
//! The renderer and parser agree on the zero-length range convention: a
//! range of length zero names the line *before* the change site, so an
//! insertion at the very top of a file renders as start 0.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PatchError {
    #[error("malformed hunk header: {0:?}")]
    MalformedHeader(String),
    #[error("hunk {header:?}: {problem}")]
    InconsistentHunk { header: String, problem: String },
}

/// Renders the change sets as unified-diff hunks with `context` lines of
/// surrounding text. Line sets must describe a valid alignment of the two
/// texts, i.e. the lines left out of both sets match up pairwise.
pub fn render_unified_diff(
    before: &str,
    after: &str,
    deleted: &BTreeSet<u32>,
    added: &BTreeSet<u32>,
    context: usize,
) -> String {
    let old: Vec<&str> = split_lines(before);
    let new: Vec<&str> = split_lines(after);

    // Flatten the alignment into a single event stream. Runs of deletions
    // are emitted before the insertions they sit next to.
    enum Ev<'a> {
        Keep(&'a str),
        Del(&'a str),
        Add(&'a str),
    }
    let mut events: Vec<Ev> = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < old.len() || j < new.len() {
        if i < old.len() && deleted.contains(&((i + 1) as u32)) {
            events.push(Ev::Del(old[i]));
            i += 1;
        } else if j < new.len() && added.contains(&((j + 1) as u32)) {
            events.push(Ev::Add(new[j]));
            j += 1;
        } else if i < old.len() && j < new.len() {
            events.push(Ev::Keep(old[i]));
            i += 1;
            j += 1;
        } else {
            // Inconsistent sets would strand a tail on one side; rendering
            // it as bare change lines keeps the output parseable.
            while i < old.len() {
                events.push(Ev::Del(old[i]));
                i += 1;
            }
            while j < new.len() {
                events.push(Ev::Add(new[j]));
                j += 1;
            }
        }
    }

    let changed: Vec<usize> = events
        .iter()
        .enumerate()
        .filter(|(_, e)| !matches!(e, Ev::Keep(_)))
        .map(|(idx, _)| idx)
        .collect();
    if changed.is_empty() {
        return String::new();
    }

    // Group change indices whose context windows touch or overlap.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &idx in &changed {
        match groups.last_mut() {
            Some((_, end)) if idx <= *end + 2 * context => *end = idx,
            _ => groups.push((idx, idx)),
        }
    }

    let mut out = String::new();
    // Running count of old/new lines covered by events before the cursor.
    let mut old_before = vec![0usize; events.len() + 1];
    let mut new_before = vec![0usize; events.len() + 1];
    for (idx, ev) in events.iter().enumerate() {
        old_before[idx + 1] = old_before[idx] + !matches!(ev, Ev::Add(_)) as usize;
        new_before[idx + 1] = new_before[idx] + !matches!(ev, Ev::Del(_)) as usize;
    }

    for (first, last) in groups {
        let start = first.saturating_sub(context);
        let end = (last + context + 1).min(events.len());
        let old_len = old_before[end] - old_before[start];
        let new_len = new_before[end] - new_before[start];
        let old_start = old_before[start] + (old_len > 0) as usize;
        let new_start = new_before[start] + (new_len > 0) as usize;
        out.push_str("@@ -");
        write_range(&mut out, old_start, old_len);
        out.push_str(" +");
        write_range(&mut out, new_start, new_len);
        out.push_str(" @@\n");
        for ev in &events[start..end] {
            let (mark, text) = match ev {
                Ev::Keep(t) => (' ', t),
                Ev::Del(t) => ('-', t),
                Ev::Add(t) => ('+', t),
            };
            out.push(mark);
            out.push_str(text);
            out.push('\n');
        }
    }
    out
}

fn write_range(out: &mut String, start: usize, len: usize) {
    if len == 1 {
        let _ = write!(out, "{start}");
    } else {
        let _ = write!(out, "{start},{len}");
    }
}

/// Recovers the deleted/added line sets from unified-diff text.
///
/// Tolerates `diff`/`---`/`+++`/index preamble lines, trailing section
/// headings after the closing `@@`, and `\ No newline at end of file`
/// markers. Hunk bodies must account for exactly the line counts their
/// header declares.
pub fn parse_unified_diff(patch: &str) -> Result<(BTreeSet<u32>, BTreeSet<u32>), PatchError> {
    let mut deleted = BTreeSet::new();
    let mut added = BTreeSet::new();

    let mut in_hunk = false;
    let mut header = String::new();
    let mut old_next = 0u32;
    let mut new_next = 0u32;
    let mut old_left = 0u64;
    let mut new_left = 0u64;

    let close = |header: &str, old_left: u64, new_left: u64| -> Result<(), PatchError> {
        if old_left != 0 || new_left != 0 {
            return Err(PatchError::InconsistentHunk {
                header: header.to_string(),
                problem: format!(
                    "body ended with {old_left} old and {new_left} new lines unaccounted for"
                ),
            });
        }
        Ok(())
    };

    for line in patch.lines() {
        if let Some(rest) = line.strip_prefix("@@ -") {
            if in_hunk {
                close(&header, old_left, new_left)?;
            }
            let (old_start, old_len, new_start, new_len) =
                parse_header(rest).ok_or_else(|| PatchError::MalformedHeader(line.to_string()))?;
            header = line.to_string();
            in_hunk = true;
            // A zero-length range names the preceding line, so the first
            // real line of the range is one further down.
            old_next = if old_len == 0 { old_start + 1 } else { old_start };
            new_next = if new_len == 0 { new_start + 1 } else { new_start };
            old_left = old_len as u64;
            new_left = new_len as u64;
            continue;
        }
        if !in_hunk {
            continue;
        }
        if old_left == 0 && new_left == 0 {
            // Between hunks; only another header or preamble may follow.
            in_hunk = false;
            continue;
        }
        let mut chars = line.chars();
        match chars.next() {
            Some(' ') | None => {
                if old_left == 0 || new_left == 0 {
                    return Err(PatchError::InconsistentHunk {
                        header,
                        problem: "context line exceeds a declared range".into(),
                    });
                }
                old_next += 1;
                new_next += 1;
                old_left -= 1;
                new_left -= 1;
            }
            Some('-') => {
                if old_left == 0 {
                    return Err(PatchError::InconsistentHunk {
                        header,
                        problem: "deletion exceeds the declared old range".into(),
                    });
                }
                deleted.insert(old_next);
                old_next += 1;
                old_left -= 1;
            }
            Some('+') => {
                if new_left == 0 {
                    return Err(PatchError::InconsistentHunk {
                        header,
                        problem: "insertion exceeds the declared new range".into(),
                    });
                }
                added.insert(new_next);
                new_next += 1;
                new_left -= 1;
            }
            Some('\\') => {} // no-newline marker
            Some(other) => {
                return Err(PatchError::InconsistentHunk {
                    header,
                    problem: format!("unrecognized line marker {other:?}"),
                });
            }
        }
    }
    if in_hunk {
        close(&header, old_left, new_left)?;
    }
    Ok((deleted, added))
}

fn parse_header(rest: &str) -> Option<(u32, u32, u32, u32)> {
    // rest is everything after "@@ -", e.g. "12,3 +12,4 @@ fn main()".
    let (old_part, rest) = rest.split_once(" +")?;
    let (new_part, _) = rest.split_once(" @@")?;
    let (old_start, old_len) = parse_range(old_part)?;
    let (new_start, new_len) = parse_range(new_part)?;
    Some((old_start, old_len, new_start, new_len))
}

fn parse_range(range: &str) -> Option<(u32, u32)> {
    match range.split_once(',') {
        Some((start, len)) => Some((start.parse().ok()?, len.parse().ok()?)),
        None => Some((range.parse().ok()?, 1)),
    }
}

pub(crate) fn split_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    lines
}
