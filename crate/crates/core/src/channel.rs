//! Deletion and erasure channels: burst patterns, deletion balls `B_t^b`,
//! two-stage normalization, confusability, and length-2 erasure bursts.
//!
//! Overlapping bursts that merge into a single shorter burst are outside the
//! channel contract here; only disjoint length-`b` intervals are modeled.

use std::collections::BTreeSet;

use crate::error::{param_err, CodeError, Result};
use crate::seq::{Interval, Word};

/// `t` disjoint deletion bursts of length exactly `b`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurstPattern {
    intervals: Vec<Interval>,
    b: usize,
}

impl BurstPattern {
    /// Build from burst start positions (1-indexed).
    pub fn new(starts: &[usize], b: usize) -> Result<Self> {
        if b == 0 {
            return param_err("burst length must be positive");
        }
        let mut starts = starts.to_vec();
        starts.sort_unstable();
        let intervals: Vec<Interval> = starts
            .iter()
            .map(|&s| Interval::new(s, s + b - 1))
            .collect();
        for w in intervals.windows(2) {
            if w[1].lo() <= w[0].hi() {
                return param_err(format!("bursts {} and {} overlap", w[0], w[1]));
            }
        }
        if intervals.iter().any(|iv| iv.lo() == 0) {
            return param_err("burst positions are 1-indexed");
        }
        Ok(BurstPattern { intervals, b })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn t(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        match self.intervals.last() {
            Some(last) if last.hi() > n => param_err(format!("burst {last} leaves [1, {n}]")),
            _ => Ok(()),
        }
    }
}

/// Delete the marked positions: `x_{[n] \ (I_1 ∪ ... ∪ I_t)}`.
pub fn apply_bursts(x: &Word, pattern: &BurstPattern) -> Result<Word> {
    pattern.validate_for(x.len())?;
    let positions: Vec<usize> = pattern
        .intervals()
        .iter()
        .flat_map(|iv| iv.iter())
        .collect();
    Ok(x.delete_positions(&positions))
}

/// All single-burst patterns for word length `n`.
pub fn single_burst_patterns(n: usize, b: usize) -> Vec<BurstPattern> {
    (1..=n.saturating_sub(b - 1))
        .map(|i| BurstPattern::new(&[i], b).unwrap())
        .collect()
}

/// All disjoint two-burst patterns for word length `n`, ascending.
pub fn two_burst_patterns(n: usize, b: usize) -> Vec<BurstPattern> {
    let mut out = Vec::new();
    if n < 2 * b {
        return out;
    }
    for i1 in 1..=(n - 2 * b + 1) {
        for i2 in (i1 + b)..=(n - b + 1) {
            out.push(BurstPattern::new(&[i1, i2], b).unwrap());
        }
    }
    out
}

pub fn burst_patterns(n: usize, t: usize, b: usize) -> Result<Vec<BurstPattern>> {
    match t {
        1 => Ok(single_burst_patterns(n, b)),
        2 => Ok(two_burst_patterns(n, b)),
        _ => param_err(format!("t must be 1 or 2, got {t}")),
    }
}

/// The deletion ball `B_t^b(x)` as a canonical sorted set.
pub fn ball(x: &Word, t: usize, b: usize) -> Result<BTreeSet<Word>> {
    if x.len() <= t * b {
        return param_err(format!("ball needs |x| > t*b ({} vs {}*{})", x.len(), t, b));
    }
    let mut out = BTreeSet::new();
    for p in burst_patterns(x.len(), t, b)? {
        out.insert(apply_bursts(x, &p)?);
    }
    Ok(out)
}

/// Normalize the two-stage process (burst at `i1` in `x`, then burst at `i2`
/// in the intermediate word) to a disjoint two-burst pattern producing the
/// same output.
pub fn normalize_two_stage(n: usize, i1: usize, i2: usize, b: usize) -> Result<BurstPattern> {
    if n <= 2 * b {
        return param_err("need n > 2b");
    }
    if i1 == 0 || i1 + b - 1 > n {
        return param_err(format!("stage-1 start {i1} out of range"));
    }
    if i2 == 0 || i2 + b - 1 > n - b {
        return param_err(format!("stage-2 start {i2} out of range"));
    }
    let (j1, j2) = if i2 >= i1 {
        (i1, i2 + b)
    } else if i2 + b <= i1 {
        (i2, i1)
    } else {
        // bursts merge into a single length-2b burst starting at i2
        (i2, i2 + b)
    };
    BurstPattern::new(&[j1, j2], b)
}

/// Two-stage deletion, the (D1) process.
pub fn two_stage_delete(x: &Word, i1: usize, i2: usize, b: usize) -> Result<Word> {
    let z = apply_bursts(x, &BurstPattern::new(&[i1], b)?)?;
    apply_bursts(&z, &BurstPattern::new(&[i2], b)?)
}

/// Confusability: `B_t^b(x) ∩ B_t^b(y) ≠ ∅`.
pub fn confusable(x: &Word, y: &Word, t: usize, b: usize) -> Result<bool> {
    if x.len() != y.len() {
        return param_err("confusability compares equal-length words");
    }
    if x == y {
        return Ok(true);
    }
    let bx = ball(x, t, b)?;
    let by = ball(y, t, b)?;
    Ok(bx.intersection(&by).next().is_some())
}

/// Two length-2 erasure bursts at `{i, i+1}` and `{j, j+1}` with `j >= i+2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    i: usize,
    j: usize,
}

impl ErasurePattern {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 {
            return param_err("erasure positions are 1-indexed");
        }
        if j < i + 2 {
            return param_err(format!(
                "erasure bursts must satisfy j >= i+2, got i={i}, j={j}"
            ));
        }
        Ok(ErasurePattern { i, j })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn positions(&self) -> [usize; 4] {
        [self.i, self.i + 1, self.j, self.j + 1]
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.j + 1 > n {
            return param_err(format!("erasure at {} leaves [1, {n}]", self.j + 1));
        }
        Ok(())
    }
}

/// All valid erasure patterns for word length `n`.
pub fn erasure_patterns(n: usize) -> Vec<ErasurePattern> {
    let mut out = Vec::new();
    for i in 1..=n.saturating_sub(3) {
        for j in (i + 2)..=(n - 1) {
            out.push(ErasurePattern { i, j });
        }
    }
    out
}

/// A word with erased cells; the sentinel is out-of-band so every alphabet
/// value remains usable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedWord {
    q: u32,
    cells: Vec<Option<u32>>,
}

impl ErasedWord {
    /// Assemble from raw cells (`None` = erased).
    pub fn from_cells(q: u32, cells: Vec<Option<u32>>) -> Result<Self> {
        if let Some(s) = cells.iter().flatten().find(|&&s| s >= q) {
            return Err(CodeError::InvalidWord(format!(
                "symbol {s} out of range for q={q}"
            )));
        }
        Ok(ErasedWord { q, cells })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, k: usize) -> Option<u32> {
        self.cells[k - 1]
    }

    pub fn cells(&self) -> &[Option<u32>] {
        &self.cells
    }

    /// The erased positions, ascending.
    pub fn erased_positions(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.is_none().then_some(k + 1))
            .collect()
    }
}

/// Erase `{i, i+1, j, j+1}` in `w`.
pub fn apply_erasures(w: &Word, pattern: ErasurePattern) -> Result<ErasedWord> {
    pattern.validate_for(w.len())?;
    let mut cells: Vec<Option<u32>> = w.symbols().iter().map(|&s| Some(s)).collect();
    for p in pattern.positions() {
        cells[p - 1] = None;
    }
    Ok(ErasedWord { q: w.q(), cells })
}

impl ErasedWord {
    /// Reconstruct a word by filling erased cells from `fill` (indexed by
    /// erased position order).
    pub fn fill(&self, values: &[u32]) -> Result<Word> {
        let erased = self.erased_positions();
        if values.len() != erased.len() {
            return param_err("fill length mismatch");
        }
        let mut symbols = Vec::with_capacity(self.len());
        let mut vi = 0;
        for c in &self.cells {
            match c {
                Some(s) => symbols.push(*s),
                None => {
                    symbols.push(values[vi]);
                    vi += 1;
                }
            }
        }
        Word::new(self.q, symbols).map_err(|e| CodeError::DecodeFailure(e.to_string()))
    }
}
