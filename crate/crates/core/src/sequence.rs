//! Greedy construction of the 2-D lattice sequence and decomposition search.
//!
//! The sequence fills diagonals (constant `i + j`) bottom-right to top-left.
//! Each natural number is scanned in turn; a number joins the grid at the
//! next unfilled position iff no *legal decomposition* exists: a subset of
//! already-placed positions forming a chain in which both coordinates
//! strictly decrease, whose values sum to the number. In one dimension the
//! same greedy rule produces the powers of two and decompositions are binary
//! expansions.

use std::collections::{BTreeSet, HashMap};

use crate::{Error, Result};

/// Default cap on how many candidate integers the builder may scan.
pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

/// One filled grid cell. `pos` is `(i, j)` with `(1, 1)` at the bottom left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceEntry {
    pub pos: (u32, u32),
    pub value: u64,
}

/// A legal decomposition: a strictly coordinate-decreasing chain of filled
/// positions whose values sum to the target. Listed from the dominant
/// (largest) point downward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub points: Vec<(u32, u32)>,
    pub values: Vec<u64>,
    pub target: u64,
}

/// The greedy-built lattice sequence over a fixed number of diagonals.
#[derive(Debug, Clone)]
pub struct LatticeSequence {
    entries: Vec<SequenceEntry>, // in fill order; values strictly increase
    num_diagonals: u32,
}

/// Grid positions in fill order: diagonal `t` holds `i + j = t + 1`,
/// traversed from `(t, 1)` up to `(1, t)`.
fn positions(num_diagonals: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for t in 1..=num_diagonals {
        for j in 1..=t {
            out.push((t + 1 - j, j));
        }
    }
    out
}

/// Builds the sequence over `num_diagonals` diagonals with the default
/// candidate cap.
pub fn build_sequence(num_diagonals: u32) -> Result<LatticeSequence> {
    build_sequence_capped(num_diagonals, DEFAULT_CANDIDATE_CAP)
}

/// As [`build_sequence`], aborting with an error if more than `candidate_cap`
/// integers get scanned before the last diagonal fills.
pub fn build_sequence_capped(num_diagonals: u32, candidate_cap: u64) -> Result<LatticeSequence> {
    if num_diagonals == 0 {
        return Err(Error::InvalidParameter("need at least one diagonal".into()));
    }
    let mut entries: Vec<SequenceEntry> = Vec::new();
    let mut candidate = 0u64;
    for pos in positions(num_diagonals) {
        loop {
            candidate += 1;
            if candidate > candidate_cap {
                return Err(Error::CandidateCapExceeded { cap: candidate_cap });
            }
            if !representable_in(&entries, candidate) {
                entries.push(SequenceEntry { pos, value: candidate });
                break;
            }
        }
    }
    Ok(LatticeSequence { entries, num_diagonals })
}

impl LatticeSequence {
    pub fn num_diagonals(&self) -> u32 {
        self.num_diagonals
    }

    /// Entries in fill order.
    pub fn entries(&self) -> &[SequenceEntry] {
        &self.entries
    }

    pub fn value_at(&self, i: u32, j: u32) -> Option<u64> {
        self.entries
            .iter()
            .find(|e| e.pos == (i, j))
            .map(|e| e.value)
    }

    pub fn max_value(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.value)
    }

    /// True iff some legal decomposition of `m` exists among stored values.
    pub fn is_representable(&self, m: u64) -> bool {
        representable_in(&self.entries, m)
    }

    /// Every legal decomposition of `m`, in depth-first order trying larger
    /// values first.
    pub fn decompositions(&self, m: u64) -> Vec<Decomposition> {
        let down = dominated_lists(&self.entries);
        let desc: Vec<usize> = (0..self.entries.len()).rev().collect();
        let max_chain = max_chain_sums(&self.entries, &down);
        let mut out = Vec::new();
        let mut chain: Vec<usize> = Vec::new();
        for &root in &desc {
            collect_chains(
                &self.entries,
                &down,
                &max_chain,
                root,
                m,
                &mut chain,
                &mut out,
            );
        }
        out
    }

    /// CSV export: one row per entry, in fill order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,value,fill_index\n");
        for (idx, e) in self.entries.iter().enumerate() {
            s.push_str(&format!("{},{},{},{}\n", e.pos.0, e.pos.1, e.value, idx + 1));
        }
        s
    }

    /// Text grid with `(1, 1)` at the bottom left, columns right-aligned.
    pub fn to_grid(&self) -> String {
        let d = self.num_diagonals;
        let mut widths = vec![0usize; d as usize];
        for e in &self.entries {
            let w = e.value.to_string().len();
            let col = (e.pos.0 - 1) as usize;
            widths[col] = widths[col].max(w);
        }
        let mut grid = String::new();
        for j in (1..=d).rev() {
            let mut row: Vec<String> = Vec::new();
            for i in 1..=(d + 1 - j) {
                let v = self.value_at(i, j).expect("filled position");
                row.push(format!("{:>width$}", v, width = widths[(i - 1) as usize]));
            }
            grid.push_str(&row.join(" "));
            grid.push('\n');
        }
        grid
    }
}

/// For each entry, the indices of entries it strictly dominates.
fn dominated_lists(entries: &[SequenceEntry]) -> Vec<Vec<usize>> {
    entries
        .iter()
        .map(|e| {
            entries
                .iter()
                .enumerate()
                .filter(|(_, d)| d.pos.0 < e.pos.0 && d.pos.1 < e.pos.1)
                .map(|(idx, _)| idx)
                .collect()
        })
        .collect()
}

/// Largest chain sum starting at each entry and descending from it.
/// Dominated entries were filled earlier (smaller diagonal), so ascending
/// fill order is a valid evaluation order.
fn max_chain_sums(entries: &[SequenceEntry], down: &[Vec<usize>]) -> Vec<u64> {
    let mut sums = vec![0u64; entries.len()];
    for i in 0..entries.len() {
        let below = down[i].iter().map(|&j| sums[j]).max().unwrap_or(0);
        sums[i] = entries[i].value + below;
    }
    sums
}

fn representable_in(entries: &[SequenceEntry], m: u64) -> bool {
    let down = dominated_lists(entries);
    let max_chain = max_chain_sums(entries, &down);
    let mut memo: HashMap<(usize, u64), bool> = HashMap::new();
    (0..entries.len())
        .rev()
        .any(|i| chain_sums_to(entries, &down, &max_chain, i, m, &mut memo))
}

/// Whether a chain starting at entry `i` (inclusive) sums to `remaining`.
fn chain_sums_to(
    entries: &[SequenceEntry],
    down: &[Vec<usize>],
    max_chain: &[u64],
    i: usize,
    remaining: u64,
    memo: &mut HashMap<(usize, u64), bool>,
) -> bool {
    let value = entries[i].value;
    if value > remaining || max_chain[i] < remaining {
        return false;
    }
    if value == remaining {
        return true;
    }
    if let Some(&hit) = memo.get(&(i, remaining)) {
        return hit;
    }
    let rest = remaining - value;
    let ok = down[i]
        .iter()
        .rev()
        .any(|&j| chain_sums_to(entries, down, max_chain, j, rest, memo));
    memo.insert((i, remaining), ok);
    ok
}

fn collect_chains(
    entries: &[SequenceEntry],
    down: &[Vec<usize>],
    max_chain: &[u64],
    i: usize,
    remaining: u64,
    chain: &mut Vec<usize>,
    out: &mut Vec<Decomposition>,
) {
    let value = entries[i].value;
    if value > remaining || max_chain[i] < remaining {
        return;
    }
    chain.push(i);
    if value == remaining {
        out.push(Decomposition {
            points: chain.iter().map(|&k| entries[k].pos).collect(),
            values: chain.iter().map(|&k| entries[k].value).collect(),
            target: chain.iter().map(|&k| entries[k].value).sum(),
        });
    } else {
        for &j in down[i].iter().rev() {
            collect_chains(entries, down, max_chain, j, remaining - value, chain, out);
        }
    }
    chain.pop();
}

/// First `count` terms of the 1-D sequence: the powers of two.
pub fn build_1d(count: u32) -> Result<Vec<u64>> {
    if count == 0 || count > 63 {
        return Err(Error::InvalidParameter(format!(
            "1-D term count must be in 1..=63, got {count}"
        )));
    }
    Ok((0..count).map(|i| 1u64 << i).collect())
}

/// The unique 1-D legal decomposition of `m`: positions (1-based) of the set
/// bits of `m`, i.e. its binary expansion.
pub fn decompose_1d(m: u64) -> BTreeSet<u32> {
    (0..64)
        .filter(|&i| (m >> i) & 1 == 1)
        .map(|i| i + 1)
        .collect()
}
