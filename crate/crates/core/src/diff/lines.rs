//! Line-granularity longest-common-subsequence diff.
//!
//! Myers' algorithm in its linear-space divide-and-conquer form: find the
//! middle snake of an optimal path with simultaneous forward and backward
//! searches, split there, recurse. Memory stays O(N + M) no matter how
//! unrelated the inputs are.
//!
//! The public entry point canonicalizes the orientation of each input pair
//! before diffing. Myers tie-breaking is not transpose-symmetric on its
//! own, so without this step `diff(a, b)` and `diff(b, a)` could pick
//! different (equally minimal) alignments; diffing each unordered pair in
//! one fixed orientation makes deletions and additions exact mirrors.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Index, IndexMut};

/// 1-based line numbers removed from `before` and inserted in `after`.
pub fn diff_line_sets<'s>(before: &[&'s str], after: &[&'s str]) -> (BTreeSet<u32>, BTreeSet<u32>) {
    // Orientation must be decided on the raw lines: interned ids depend on
    // argument order and would break the pair-wise canonical choice.
    let swapped = before > after;

    // Equal-line comparisons dominate the run time; intern every distinct
    // line once so the search compares integers.
    let mut intern: HashMap<&'s str, u64> = HashMap::new();
    let a = intern_ids(before, &mut intern);
    let b = intern_ids(after, &mut intern);

    if swapped {
        let (deleted_from_b, added_to_a) = myers(&b, &a);
        (added_to_a, deleted_from_b)
    } else {
        myers(&a, &b)
    }
}

fn intern_ids<'s>(lines: &[&'s str], table: &mut HashMap<&'s str, u64>) -> Vec<u64> {
    lines
        .iter()
        .map(|&line| {
            let next = table.len() as u64;
            *table.entry(line).or_insert(next)
        })
        .collect()
}

fn myers(a: &[u64], b: &[u64]) -> (BTreeSet<u32>, BTreeSet<u32>) {
    let mut deleted = BTreeSet::new();
    let mut added = BTreeSet::new();
    let max_d = (a.len() + b.len()).div_ceil(2) + 1;
    let mut vf = V::new(max_d);
    let mut vb = V::new(max_d);
    conquer(a, 0, b, 0, &mut vf, &mut vb, &mut deleted, &mut added);
    (deleted, added)
}

#[allow(clippy::too_many_arguments)]
fn conquer(
    mut a: &[u64],
    mut a_base: usize,
    mut b: &[u64],
    mut b_base: usize,
    vf: &mut V,
    vb: &mut V,
    deleted: &mut BTreeSet<u32>,
    added: &mut BTreeSet<u32>,
) {
    let prefix = common_prefix_len(a, b);
    a = &a[prefix..];
    b = &b[prefix..];
    a_base += prefix;
    b_base += prefix;

    let suffix = common_suffix_len(a, b);
    a = &a[..a.len() - suffix];
    b = &b[..b.len() - suffix];

    if a.is_empty() {
        for j in 0..b.len() {
            added.insert((b_base + j + 1) as u32);
        }
    } else if b.is_empty() {
        for i in 0..a.len() {
            deleted.insert((a_base + i + 1) as u32);
        }
    } else {
        let (x, y) = middle_snake_start(a, b, vf, vb);
        conquer(&a[..x], a_base, &b[..y], b_base, vf, vb, deleted, added);
        conquer(&a[x..], a_base + x, &b[y..], b_base + y, vf, vb, deleted, added);
    }
}

/// Start coordinate of the middle snake of an optimal edit path through
/// the (nonempty x nonempty) edit graph of `a` and `b`.
///
/// Runs the furthest-reaching D-path search forward from (0,0) and
/// backward from (N,M) until the frontiers overlap; by Myers' Lemma the
/// overlap happens on an optimal path. The snake itself does not need to
/// be returned: splitting at its start leaves it as a common prefix of
/// the second subproblem.
fn middle_snake_start(a: &[u64], b: &[u64], vf: &mut V, vb: &mut V) -> (usize, usize) {
    let n = a.len();
    let m = b.len();
    let delta = n as isize - m as isize;
    let odd = delta & 1 == 1;

    // Virtual endpoints just outside the graph; everything else read below
    // was written earlier in this call, so the buffers can be reused dirty.
    vf[1] = 0;
    vb[1] = 0;

    let d_max = ((n + m + 1) / 2 + 1) as isize;
    for d in 0..d_max {
        for k in (-d..=d).rev().step_by(2) {
            let mut x = if k == -d || (k != d && vf[k - 1] < vf[k + 1]) {
                vf[k + 1]
            } else {
                vf[k - 1] + 1
            };
            let mut y = (x as isize - k) as usize;
            let (x0, y0) = (x, y);
            while x < n && y < m && a[x] == b[y] {
                x += 1;
                y += 1;
            }
            vf[k] = x;
            if odd && (k - delta).abs() <= d - 1 && vf[k] + vb[delta - k] >= n {
                return (x0, y0);
            }
        }

        for k in (-d..=d).rev().step_by(2) {
            let mut x = if k == -d || (k != d && vb[k - 1] < vb[k + 1]) {
                vb[k + 1]
            } else {
                vb[k - 1] + 1
            };
            let mut y = (x as isize - k) as usize;
            while x < n && y < m && a[n - x - 1] == b[m - y - 1] {
                x += 1;
                y += 1;
            }
            vb[k] = x;
            // The backward snake runs from (n-x, m-y) to (n-x0, m-y0); its
            // start in forward coordinates is the smaller corner.
            if !odd && (k - delta).abs() <= d && vb[k] + vf[delta - k] >= n {
                return (n - x, m - y);
            }
        }
    }
    unreachable!("edit path search exhausted the D budget");
}

fn common_prefix_len(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn common_suffix_len(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count()
}

/// Furthest-reaching x per diagonal k, with k allowed to be negative.
struct V {
    offset: isize,
    v: Vec<usize>,
}

impl V {
    fn new(max_d: usize) -> Self {
        V {
            offset: max_d as isize,
            v: vec![0; 2 * max_d + 2],
        }
    }
}

impl Index<isize> for V {
    type Output = usize;
    fn index(&self, k: isize) -> &usize {
        &self.v[(k + self.offset) as usize]
    }
}

impl IndexMut<isize> for V {
    fn index_mut(&mut self, k: isize) -> &mut usize {
        &mut self.v[(k + self.offset) as usize]
    }
}
