//! Exact confusability-graph coloring: the desk-scale stand-in for cited
//! sketch existence results.
//!
//! Vertices are the domain words; edges join distinct words whose deletion
//! balls intersect. A greedy coloring in lexicographic order yields labels
//! that separate every confusable pair by construction, so the sketch
//! contract holds with label space = color count. Decoding scans the color
//! class for the unique word whose ball contains the corrupted word.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::channel::ball;
use crate::error::{param_err, CodeError, Result};
use crate::ratio::Ratio;
use crate::seq::{all_words, is_regular, Word};
use crate::sketch::Sketch;

/// Domain of a coloring table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    /// All of `Σ_q^m`.
    Full,
    /// The d-regular subset.
    Regular(Ratio),
}

impl DomainSpec {
    fn admits(&self, x: &Word) -> bool {
        match self {
            DomainSpec::Full => true,
            DomainSpec::Regular(d) => is_regular(x, *d),
        }
    }

    fn tag(&self) -> String {
        match self {
            DomainSpec::Full => "full".into(),
            DomainSpec::Regular(d) => format!("reg{}-{}", d.num(), d.den()),
        }
    }
}

#[derive(Clone)]
pub struct ColoringSketch {
    q: u32,
    m: usize,
    t: usize,
    b: usize,
    domain: DomainSpec,
    words: Arc<Vec<Word>>,
    colors: Arc<Vec<u64>>,
    index: Arc<HashMap<Word, usize>>,
    buckets: Arc<HashMap<u64, Vec<usize>>>,
    balls: Arc<Vec<std::collections::BTreeSet<Word>>>,
    color_count: u64,
    loaded_from_cache: bool,
}

impl ColoringSketch {
    /// Build (or load) the table for `Σ_q^m` under `t` bursts of length `b`.
    pub fn build(
        q: u32,
        m: usize,
        t: usize,
        b: usize,
        domain: DomainSpec,
        cap: u64,
        cache_dir: Option<&Path>,
    ) -> Result<Self> {
        if m <= t * b {
            return param_err(format!("coloring domain needs m > t*b ({m} vs {t}*{b})"));
        }
        let total = (q as u128)
            .checked_pow(m as u32)
            .ok_or_else(|| CodeError::CapExceeded("q^m overflow".into()))?;
        if total > cap as u128 {
            return Err(CodeError::CapExceeded(format!(
                "coloring domain of {total} words exceeds cap {cap}"
            )));
        }

        let words: Vec<Word> = all_words(q, m).filter(|x| domain.admits(x)).collect();
        let balls: Vec<_> = words
            .iter()
            .map(|x| ball(x, t, b))
            .collect::<Result<Vec<_>>>()?;

        let cache_path = cache_dir.map(|dir| cache_file_path(dir, q, m, t, b, &domain));
        let mut loaded_from_cache = false;
        let colors = match cache_path
            .as_ref()
            .and_then(|p| load_colors(p, &words).ok().flatten())
        {
            Some(colors) => {
                loaded_from_cache = true;
                colors
            }
            None => {
                let colors = greedy_color(&words, &balls);
                if let Some(path) = &cache_path {
                    // best effort; a read-only cache dir must not fail the run
                    let _ = save_colors(path, q, m, t, b, &domain, &words, &colors);
                }
                colors
            }
        };

        let color_count = colors.iter().copied().max().map_or(0, |c| c + 1);
        let mut index = HashMap::new();
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            index.insert(w.clone(), i);
            buckets.entry(colors[i]).or_default().push(i);
        }
        Ok(ColoringSketch {
            q,
            m,
            t,
            b,
            domain,
            words: Arc::new(words),
            colors: Arc::new(colors),
            index: Arc::new(index),
            buckets: Arc::new(buckets),
            balls: Arc::new(balls),
            color_count,
            loaded_from_cache,
        })
    }

    pub fn color_count(&self) -> u64 {
        self.color_count
    }

    pub fn domain_size(&self) -> usize {
        self.words.len()
    }

    pub fn domain_words(&self) -> &[Word] {
        &self.words
    }

    pub fn loaded_from_cache(&self) -> bool {
        self.loaded_from_cache
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Max degree + 1, the classical greedy bound; the realized color count
    /// never exceeds it.
    pub fn greedy_bound(&self) -> u64 {
        let mut max_deg = 0usize;
        for i in 0..self.words.len() {
            let deg = (0..self.words.len())
                .filter(|&j| j != i && self.balls[i].intersection(&self.balls[j]).next().is_some())
                .count();
            max_deg = max_deg.max(deg);
        }
        max_deg as u64 + 1
    }
}

fn greedy_color(words: &[Word], balls: &[std::collections::BTreeSet<Word>]) -> Vec<u64> {
    // output word -> indices of already-colored vertices whose ball holds it
    let mut seen: HashMap<&Word, Vec<usize>> = HashMap::new();
    let mut colors = vec![0u64; words.len()];
    for i in 0..words.len() {
        let mut used: Vec<u64> = Vec::new();
        for out in &balls[i] {
            if let Some(owners) = seen.get(out) {
                used.extend(owners.iter().map(|&j| colors[j]));
            }
        }
        used.sort_unstable();
        used.dedup();
        let mut color = 0u64;
        for u in used {
            if u == color {
                color += 1;
            } else if u > color {
                break;
            }
        }
        colors[i] = color;
        for out in &balls[i] {
            seen.entry(out).or_default().push(i);
        }
    }
    colors
}

impl Sketch for ColoringSketch {
    fn label_space(&self) -> u64 {
        self.color_count.max(1)
    }

    fn label(&self, x: &Word) -> Result<u64> {
        self.index
            .get(x)
            .map(|&i| self.colors[i])
            .ok_or_else(|| CodeError::InvalidWord(format!("{x} is not in the sketch domain")))
    }

    fn decode(&self, corrupted: &Word, label: u64) -> Result<Word> {
        if corrupted.q() != self.q || corrupted.len() + self.t * self.b != self.m {
            return Err(CodeError::InvalidWord(format!(
                "corrupted word must have length {} over Σ_{}",
                self.m - self.t * self.b,
                self.q
            )));
        }
        let Some(bucket) = self.buckets.get(&label) else {
            return Err(CodeError::DecodeFailure("unused color label".into()));
        };
        let mut found: Option<&Word> = None;
        for &i in bucket {
            if self.balls[i].contains(corrupted) {
                if found.is_some() {
                    return Err(CodeError::DecodeFailure(
                        "two same-color words explain the corruption; coloring broken".into(),
                    ));
                }
                found = Some(&self.words[i]);
            }
        }
        found
            .cloned()
            .ok_or_else(|| CodeError::DecodeFailure("no word consistent with label".into()))
    }

    fn describe(&self) -> String {
        format!(
            "coloring(q={}, m={}, t={}, b={}, domain={}, colors={})",
            self.q,
            self.m,
            self.t,
            self.b,
            self.domain.tag(),
            self.color_count
        )
    }
}

fn cache_file_path(
    dir: &Path,
    q: u32,
    m: usize,
    t: usize,
    b: usize,
    domain: &DomainSpec,
) -> PathBuf {
    dir.join(format!("coloring_q{q}_m{m}_t{t}_b{b}_{}.tbl", domain.tag()))
}

const CACHE_MAGIC: &str = "burstcode coloring-table v1";

#[allow(clippy::too_many_arguments)]
fn save_colors(
    path: &Path,
    q: u32,
    m: usize,
    t: usize,
    b: usize,
    domain: &DomainSpec,
    words: &[Word],
    colors: &[u64],
) -> Result<()> {
    let mut body = String::new();
    let _ = writeln!(body, "{CACHE_MAGIC}");
    let _ = writeln!(body, "q={q} m={m} t={t} b={b} domain={}", domain.tag());
    let _ = writeln!(body, "entries={}", words.len());
    for (w, c) in words.iter().zip(colors) {
        let _ = writeln!(body, "{w} {c}");
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CodeError::Cache(e.to_string()))?;
    }
    let tmp = path.with_extension("tbl.tmp");
    std::fs::write(&tmp, body).map_err(|e| CodeError::Cache(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| CodeError::Cache(e.to_string()))?;
    Ok(())
}

/// Returns `Ok(None)` when the file is absent or does not match the
/// parameters/domain; a matching file yields the stored colors.
fn load_colors(path: &Path, words: &[Word]) -> Result<Option<Vec<u64>>> {
    let Ok(text) = std::fs::read_to_string(path) else {
        return Ok(None);
    };
    let mut lines = text.lines();
    if lines.next() != Some(CACHE_MAGIC) {
        return Ok(None);
    }
    let _params = lines.next();
    let Some(entries_line) = lines.next() else {
        return Ok(None);
    };
    let Some(count) = entries_line
        .strip_prefix("entries=")
        .and_then(|s| s.parse::<usize>().ok())
    else {
        return Ok(None);
    };
    if count != words.len() {
        return Ok(None);
    }
    let mut colors = Vec::with_capacity(count);
    for (expected, line) in words.iter().zip(lines) {
        let Some((w, c)) = line.rsplit_once(' ') else {
            return Ok(None);
        };
        if w != expected.to_string() {
            return Ok(None);
        }
        let Ok(color) = c.parse::<u64>() else {
            return Ok(None);
        };
        colors.push(color);
    }
    if colors.len() != count {
        return Ok(None);
    }
    Ok(Some(colors))
}
