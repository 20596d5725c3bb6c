//! Sequences over `Σ_q = {0, .., q-1}`: runs, array representations, the u/v
//! symbol decomposition, and d-regularity.
//!
//! Interval arithmetic follows the 1-indexed conventions of the constructions
//! throughout (`[m, n]` is inclusive); 0-indexed views exist only at the edge
//! of the API.

use std::fmt;

use crate::error::{param_err, CodeError, Result};
use crate::ratio::Ratio;

pub type Symbol = u32;

/// A finite sequence over `Σ_q` with its alphabet size attached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u32,
    symbols: Vec<Symbol>,
}

impl Word {
    pub fn new(q: u32, symbols: Vec<Symbol>) -> Result<Self> {
        if q < 2 {
            return param_err(format!("alphabet size must be >= 2, got {q}"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(CodeError::InvalidWord(format!(
                "symbol {s} out of range for q={q}"
            )));
        }
        Ok(Word { q, symbols })
    }

    pub fn from_slice(q: u32, symbols: &[Symbol]) -> Result<Self> {
        Word::new(q, symbols.to_vec())
    }

    pub fn zeros(q: u32, n: usize) -> Self {
        Word {
            q,
            symbols: vec![0; n],
        }
    }

    /// Parse the serialized form: digit string for `q <= 10`, comma-separated
    /// integers otherwise. The empty string is the empty word.
    pub fn parse(s: &str, q: u32) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Word::new(q, Vec::new());
        }
        let symbols: Vec<Symbol> = if q <= 10 {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| CodeError::InvalidWord(format!("bad digit `{c}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Symbol>()
                        .map_err(|_| CodeError::InvalidWord(format!("bad symbol `{t}`")))
                })
                .collect::<Result<_>>()?
        };
        Word::new(q, symbols)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// 0-indexed access.
    pub fn get(&self, i: usize) -> Symbol {
        self.symbols[i]
    }

    /// 1-indexed access, matching interval math.
    pub fn at1(&self, i: usize) -> Symbol {
        self.symbols[i - 1]
    }

    /// Substring `x_I` for a 1-indexed inclusive interval; empty intervals
    /// yield the empty word. Panics if a nonempty interval leaves `[1, n]`.
    pub fn substring(&self, iv: Interval) -> Word {
        if iv.is_empty() {
            return Word {
                q: self.q,
                symbols: Vec::new(),
            };
        }
        assert!(
            iv.lo() >= 1 && iv.hi() <= self.len(),
            "substring {iv} out of range for |x|={}",
            self.len()
        );
        Word {
            q: self.q,
            symbols: self.symbols[iv.lo() - 1..iv.hi()].to_vec(),
        }
    }

    /// Subsequence with the given sorted 1-indexed positions removed.
    pub fn delete_positions(&self, positions: &[usize]) -> Word {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let mut out = Vec::with_capacity(self.len().saturating_sub(positions.len()));
        let mut del = positions.iter().peekable();
        for (i, &s) in self.symbols.iter().enumerate() {
            if del.peek() == Some(&&(i + 1)) {
                del.next();
            } else {
                out.push(s);
            }
        }
        Word {
            q: self.q,
            symbols: out,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.q, other.q);
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word { q: self.q, symbols }
    }

    /// Zero padding to the next multiple of `chunk`.
    pub fn zero_pad_to_multiple(&self, chunk: usize) -> Word {
        let target = self.len().div_ceil(chunk) * chunk;
        let mut symbols = self.symbols.clone();
        symbols.resize(target, 0);
        Word { q: self.q, symbols }
    }

    /// True if `self` is a subsequence of `other`.
    pub fn is_subsequence_of(&self, other: &Word) -> bool {
        let mut it = other.symbols.iter();
        self.symbols.iter().all(|s| it.by_ref().any(|t| t == s))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (q={})", self.q)
    }
}

/// 1-indexed inclusive interval `[lo, hi]`; `lo > hi` means empty.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn empty() -> Self {
        Interval { lo: 1, hi: 0 }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        if self.lo > self.hi {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn contains_interval(&self, other: Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn intersects(&self, other: Interval) -> bool {
        !self.is_empty() && !other.is_empty() && self.lo <= other.hi && other.lo <= self.hi
    }

    /// Intersection with `[1, n]`.
    pub fn clamp(&self, n: usize) -> Interval {
        Interval {
            lo: self.lo.max(1),
            hi: self.hi.min(n),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The `n' x ceil(n/n')` array `A(x, n, n')`: column `j` holds the `j`-th
/// length-`n'` block of the zero-padded word.
#[derive(Clone, PartialEq, Eq)]
pub struct ArrayRep {
    rows: Vec<Word>,
    source_len: usize,
}

impl ArrayRep {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Word::len)
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Row `i`, 1-indexed.
    pub fn row(&self, i: usize) -> &Word {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    /// Entry at 1-indexed row `i`, 0-indexed column `j`: equals `x~_{i + n' j}`.
    pub fn entry0(&self, i: usize, j: usize) -> Symbol {
        self.rows[i - 1].get(j)
    }

    /// Entry at 1-indexed row and column.
    pub fn entry(&self, i: usize, j: usize) -> Symbol {
        self.rows[i - 1].at1(j)
    }

    /// Column-major flattening: reproduces the zero-padded word.
    pub fn flatten(&self) -> Word {
        let q = self.rows.first().map_or(2, Word::q);
        let mut symbols = Vec::with_capacity(self.row_count() * self.cols());
        for j in 0..self.cols() {
            for row in &self.rows {
                symbols.push(row.get(j));
            }
        }
        Word { q, symbols }
    }

    /// Rebuild a word of length `source_len` from replacement rows.
    pub fn from_rows(rows: Vec<Word>, source_len: usize) -> Result<ArrayRep> {
        if rows.is_empty() {
            return param_err("array needs at least one row");
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return param_err("array rows must have equal length");
        }
        Ok(ArrayRep { rows, source_len })
    }

    /// Flatten and truncate back to the source length, checking that the
    /// padding area is all zero.
    pub fn into_word(&self) -> Result<Word> {
        let flat = self.flatten();
        if flat.symbols[self.source_len..].iter().any(|&s| s != 0) {
            return Err(CodeError::DecodeFailure(
                "nonzero symbols in zero-padding area".into(),
            ));
        }
        Word::new(flat.q, flat.symbols[..self.source_len].to_vec())
    }
}

/// `A(x, n, n')` with the precondition `1 <= n' < n`.
pub fn array_rep(x: &Word, row_count: usize) -> Result<ArrayRep> {
    if row_count == 0 || row_count >= x.len() {
        return param_err(format!(
            "row count must satisfy 1 <= n' < |x| ({} vs {})",
            row_count,
            x.len()
        ));
    }
    Ok(array_rep_any(x, row_count))
}

/// Same construction without the `n' < n` restriction; used internally on
/// corrupted words that may be shorter than the row count.
pub fn array_rep_any(x: &Word, row_count: usize) -> ArrayRep {
    assert!(row_count >= 1);
    let padded = x.zero_pad_to_multiple(row_count);
    let cols = padded.len() / row_count;
    let rows = (1..=row_count)
        .map(|i| {
            let symbols = (0..cols)
                .map(|j| padded.get(i - 1 + row_count * j))
                .collect();
            Word { q: x.q(), symbols }
        })
        .collect();
    ArrayRep {
        rows,
        source_len: x.len(),
    }
}

/// Run decomposition: boundaries `p_0 = 0 < p_1 < ... < p_r = m` with run `j`
/// occupying `I_j = [p_{j-1}+1, p_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunProfile {
    boundaries: Vec<usize>,
    run_symbols: Vec<Symbol>,
}

pub fn run_profile(x: &Word) -> Result<RunProfile> {
    if x.is_empty() {
        return param_err("run profile needs |x| >= 1");
    }
    let mut boundaries = vec![0];
    let mut run_symbols = Vec::new();
    let mut current = x.get(0);
    for i in 1..x.len() {
        if x.get(i) != current {
            boundaries.push(i);
            run_symbols.push(current);
            current = x.get(i);
        }
    }
    boundaries.push(x.len());
    run_symbols.push(current);
    Ok(RunProfile {
        boundaries,
        run_symbols,
    })
}

impl RunProfile {
    /// Number of runs `r(x)`.
    pub fn r(&self) -> usize {
        self.run_symbols.len()
    }

    pub fn word_len(&self) -> usize {
        *self.boundaries.last().unwrap()
    }

    /// `p_j` for `0 <= j <= r`.
    pub fn boundary(&self, j: usize) -> usize {
        self.boundaries[j]
    }

    /// `I_j = [p_{j-1}+1, p_j]`, 1-indexed run `j`.
    pub fn run(&self, j: usize) -> Interval {
        Interval::new(self.boundaries[j - 1] + 1, self.boundaries[j])
    }

    pub fn run_symbol(&self, j: usize) -> Symbol {
        self.run_symbols[j - 1]
    }

    /// Index of the run containing position `k`.
    pub fn run_of(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.word_len());
        // boundaries is sorted; find first p_j >= k
        self.boundaries.partition_point(|&p| p < k)
    }

    /// Scaled interval `I_j' = [p_{j-1} b + 1, p_j b]` in `[n]`.
    pub fn i_prime(&self, j: usize, b: usize) -> Interval {
        Interval::new(self.boundaries[j - 1] * b + 1, self.boundaries[j] * b)
    }

    /// Left pad `I_j^L = [(p_{j-1}-1) b + 2, p_{j-1} b] ∩ [n]`, the at most
    /// `b-1` positions immediately left of `I_j'`.
    pub fn i_left(&self, j: usize, b: usize, n: usize) -> Interval {
        let p = self.boundaries[j - 1];
        if p == 0 {
            return Interval::empty();
        }
        Interval::new((p - 1) * b + 2, p * b).clamp(n)
    }
}

/// The split `x_i = ceil(q/2)·u_i + v_i` with `u_i ∈ {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UVDecomp {
    pub u: Word,
    pub v: Word,
}

pub fn half_base(q: u32) -> u32 {
    q.div_ceil(2)
}

/// The binary projection `u(x)`.
pub fn u_word(x: &Word) -> Word {
    let h = half_base(x.q());
    Word {
        q: 2,
        symbols: x.symbols().iter().map(|&s| s / h).collect(),
    }
}

pub fn uv_decompose(x: &Word) -> UVDecomp {
    let h = half_base(x.q());
    let u = u_word(x);
    let v = Word {
        q: h.max(2),
        symbols: x.symbols().iter().map(|&s| s % h).collect(),
    };
    UVDecomp { u, v }
}

/// Inverse of [`uv_decompose`]; fails on pairs whose composite symbol would
/// leave `Σ_q` (possible only for odd `q`).
pub fn uv_compose(u: &Word, v: &Word, q: u32) -> Result<Word> {
    if u.len() != v.len() {
        return param_err("u and v must have equal length");
    }
    let h = half_base(q);
    let mut symbols = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let (ui, vi) = (u.get(i), v.get(i));
        if ui > 1 || vi >= h {
            return Err(CodeError::InvalidWord(format!(
                "component out of range at position {}: u={ui}, v={vi}",
                i + 1
            )));
        }
        let s = h * ui + vi;
        if s >= q {
            return Err(CodeError::InvalidWord(format!(
                "composite symbol {s} not in Σ_{q} at position {}",
                i + 1
            )));
        }
        symbols.push(s);
    }
    Word::new(q, symbols)
}

/// Window length for d-regularity at word length `n`: the smallest integer
/// `L >= d·log2(n)`.
pub fn regular_window_len(n: usize, d: Ratio) -> usize {
    d.log2_threshold(n)
}

/// d-regularity: every substring of `u(x)` of length at least `d·log2(n)`
/// contains both `00` and `11`.
pub fn is_regular(x: &Word, d: Ratio) -> bool {
    let n = x.len();
    if n == 0 {
        return true;
    }
    let window = regular_window_len(n, d);
    if window > n {
        return true; // no substring is long enough
    }
    if window < 4 {
        return false; // a window that short cannot hold both 00 and 11
    }
    let u = u_word(x);
    // pair_is[i] = 1 if u_{i+1} = u_{i+2} = bit (0-indexed pair start i)
    let mut zz = vec![0u32; n]; // prefix counts of 00-pairs
    let mut oo = vec![0u32; n];
    let mut z_acc = 0;
    let mut o_acc = 0;
    for i in 0..n - 1 {
        if u.get(i) == u.get(i + 1) {
            if u.get(i) == 0 {
                z_acc += 1;
            } else {
                o_acc += 1;
            }
        }
        zz[i + 1] = z_acc;
        oo[i + 1] = o_acc;
    }
    // window starting at 0-indexed s covers pairs s..s+window-2
    for s in 0..=(n - window) {
        let pairs_zz = zz[s + window - 1] - zz[s];
        let pairs_oo = oo[s + window - 1] - oo[s];
        if pairs_zz == 0 || pairs_oo == 0 {
            return false;
        }
    }
    true
}

/// Iterate all of `Σ_q^n` in lexicographic order.
pub fn all_words(q: u32, n: usize) -> impl Iterator<Item = Word> {
    WordIter {
        q,
        next: Some(vec![0; n]),
    }
}

struct WordIter {
    q: u32,
    next: Option<Vec<Symbol>>,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let word = Word {
            q: self.q,
            symbols: current.clone(),
        };
        let mut odo = current;
        let mut i = odo.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if odo[i] + 1 < self.q {
                odo[i] += 1;
                odo[i + 1..].fill(0);
                self.next = Some(odo);
                break;
            }
        }
        Some(word)
    }
}

/// Exact count of d-regular sequences in `Σ_q^n` by enumeration; refuses
/// enumerations larger than `cap` words.
pub fn count_regular(q: u32, n: usize, d: Ratio, cap: u64) -> Result<u64> {
    let total = (q as u128)
        .checked_pow(n as u32)
        .ok_or_else(|| CodeError::CapExceeded(format!("q^n overflows for q={q}, n={n}")))?;
    if total > cap as u128 {
        return Err(CodeError::CapExceeded(format!(
            "enumerating {total} words exceeds cap {cap}"
        )));
    }
    Ok(all_words(q, n).filter(|x| is_regular(x, d)).count() as u64)
}
