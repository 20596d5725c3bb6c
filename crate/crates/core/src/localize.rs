//! Localizing two deletions in a recovered binary word.
//!
//! With the original word in hand (recovered via an η-role sketch), the set
//! `S` of position pairs whose deletion explains the corrupted word is
//! computable exactly. Either every pair in `S` touches one fixed pair of
//! distinct runs — the RunPair outcome — or all candidates sit inside one
//! short interval whose length is bounded by `3d·log2(m)` for d-regular
//! words. Burst channels lift the column-space result to `[n]`.

use crate::error::{param_err, CodeError, Result};
use crate::ratio::Ratio;
use crate::seq::{run_profile, Interval, RunProfile, Word};

/// Outcome of localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Localization {
    /// Both deletions identified up to distinct runs `j1 < j2`.
    RunPair { j1: usize, j2: usize },
    /// Both deletions inside one interval.
    Window(Interval),
}

/// All pairs `(k1 < k2)` of 1-indexed positions with
/// `delete(original, {k1, k2}) = corrupted`.
pub fn deletion_pair_candidates(original: &Word, corrupted: &Word) -> Vec<(usize, usize)> {
    let m = original.len();
    let mut out = Vec::new();
    if corrupted.len() + 2 != m {
        return out;
    }
    for k1 in 1..=m - 1 {
        for k2 in (k1 + 1)..=m {
            if original.delete_positions(&[k1, k2]) == *corrupted {
                out.push((k1, k2));
            }
        }
    }
    out
}

/// Localize two deletions in a binary word (the b = 1 case).
///
/// Returns `RunPair` when every candidate pair touches the same unordered
/// pair of distinct runs; otherwise the minimal interval covering all
/// candidates. For d-regular originals the window length never exceeds the
/// smallest integer `>= 3d·log2(m)`; exceeding it (or an empty candidate
/// set) is a contract violation.
pub fn localize_binary_pair(original: &Word, corrupted: &Word, d: Ratio) -> Result<Localization> {
    if original.q() != 2 || corrupted.q() != 2 {
        return param_err("localization operates on binary words");
    }
    let pairs = deletion_pair_candidates(original, corrupted);
    if pairs.is_empty() {
        return Err(CodeError::ContractViolation(
            "corrupted word is not a two-deletion result of the original".into(),
        ));
    }
    let profile = run_profile(original)?;
    let runs: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(k1, k2)| (profile.run_of(k1), profile.run_of(k2)))
        .collect();
    let (j1, j2) = runs[0];
    if j1 != j2 && runs.iter().all(|&r| r == (j1, j2)) {
        return Ok(Localization::RunPair { j1, j2 });
    }
    let lo = pairs.iter().map(|&(k1, _)| k1).min().unwrap();
    let hi = pairs.iter().map(|&(_, k2)| k2).max().unwrap();
    let window = Interval::new(lo, hi);
    let bound = d.scaled(3).log2_threshold(original.len());
    if window.len() > bound {
        return Err(CodeError::ContractViolation(format!(
            "window {window} of length {} exceeds the regular bound {bound}",
            window.len()
        )));
    }
    Ok(Localization::Window(window))
}

/// Reroute adjacent-run pairs (`j2 = j1 + 1`) to the window covering both
/// runs; the sieve decoders treat that situation via their window branch.
pub fn demote_adjacent(loc: Localization, profile: &RunProfile) -> Localization {
    match loc {
        Localization::RunPair { j1, j2 } if j2 == j1 + 1 => Localization::Window(Interval::new(
            profile.boundary(j1 - 1) + 1,
            profile.boundary(j2),
        )),
        other => other,
    }
}

/// Lift a column-space localization of the first array row to `[n]`.
///
/// RunPair stays as run indices (with covering sets `I_j^L ∪ I_j'`); a window
/// `[c, e]` in `[n/b]` maps to `[(c-2)b + 2, e·b] ∩ [n]`.
pub fn localize_bursts(
    recovered_row: &Word,
    corrupted_row: &Word,
    n: usize,
    b: usize,
    d: Ratio,
) -> Result<Localization> {
    if b == 0 || recovered_row.len() != n.div_ceil(b) {
        return param_err("row length must be ceil(n/b)");
    }
    let profile = run_profile(recovered_row)?;
    let loc = localize_binary_pair(recovered_row, corrupted_row, d)?;
    match demote_adjacent(loc, &profile) {
        Localization::RunPair { j1, j2 } => Ok(Localization::RunPair { j1, j2 }),
        Localization::Window(cols) => {
            let lo = (cols.lo() as i64 - 2) * b as i64 + 2;
            let hi = cols.hi() * b;
            Ok(Localization::Window(
                Interval::new(lo.max(1) as usize, hi).clamp(n),
            ))
        }
    }
}
