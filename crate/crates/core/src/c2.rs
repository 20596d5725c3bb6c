//! The q-ary (q > 2) two-deletion sieve code.
//!
//! Codewords are d-regular words pinned by five syndromes: an η-role label of
//! the binary projection `u(x)`, the run syndromes
//! `f0 = Σ_j L(x_{I_j}) mod 2N1` and `f1 = Σ_j j·L(x_{I_j}) mod Q` where `L`
//! is a per-run single-deletion label, `I_j` ranges over the runs of `u(x)`,
//! and `Q` is the smallest prime at least `max{n, N1}`, plus window
//! checksums `h0`, `h1` with stride `P = 3d·log2 n`.
//!
//! Decoding mirrors the burst code: recover `u(x)`, localize, then either
//! solve the 2x2 run-label system over `F_Q` and redecode both hit runs, or
//! recover the window tuple from the parity checksum.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::c1::DecodeBranch;
use crate::error::{param_err, CodeError, Result};
use crate::localize::{demote_adjacent, localize_binary_pair, Localization};
use crate::ratio::Ratio;
use crate::seq::{
    all_words, is_regular, regular_window_len, run_profile, u_word, Interval, RunProfile, Word,
};
use crate::sketch::{BackendKind, ColoringSketch, DomainSpec, Sketch, TenengoltsSketch, Xi1Sketch};

/// Smallest prime `>= m`; by Bertrand's postulate it is below `2m`.
pub fn prime_at_least(m: u64) -> u64 {
    let mut candidate = m.max(2);
    loop {
        if is_prime(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct C2Syndrome {
    pub eta: u64,
    pub f0: u64,
    pub f1: u64,
    pub h0: u64,
    pub h1: u64,
}

pub struct C2Params {
    pub q: u32,
    pub n: usize,
    pub d: Ratio,
    pub backend: BackendKind,
    window_len: usize,
    max_run: usize,
    eta: Arc<ColoringSketch>,
    run_sketches: BTreeMap<usize, Arc<dyn Sketch>>,
    n1: u64,
    q_prime: u64,
    pub stride: usize,
    windows: Vec<Interval>,
    xi1: BTreeMap<usize, Arc<Xi1Sketch>>,
    n2: u64,
}

impl C2Params {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        q: u32,
        n: usize,
        d: Ratio,
        backend: BackendKind,
        stride_override: Option<usize>,
        cap: u64,
        cache_dir: Option<&std::path::Path>,
    ) -> Result<Arc<Self>> {
        if q <= 2 {
            return param_err("the two-deletion sieve needs q > 2");
        }
        if n <= 2 {
            return param_err("length must satisfy n > 2");
        }
        let window_len = regular_window_len(n, d);
        let max_run = if window_len > n {
            n
        } else {
            window_len.saturating_sub(1)
        };

        let eta = Arc::new(ColoringSketch::build(
            2,
            n,
            2,
            1,
            DomainSpec::Regular(d),
            cap,
            cache_dir,
        )?);

        let mut run_sketches: BTreeMap<usize, Arc<dyn Sketch>> = BTreeMap::new();
        for len in 1..=max_run {
            let sketch: Arc<dyn Sketch> = if backend == BackendKind::Constructive || len == 1 {
                Arc::new(TenengoltsSketch::new(q, len)?)
            } else {
                Arc::new(ColoringSketch::build(
                    q,
                    len,
                    1,
                    1,
                    DomainSpec::Full,
                    cap,
                    cache_dir,
                )?)
            };
            run_sketches.insert(len, sketch);
        }
        let n1 = run_sketches.values().map(|s| s.label_space()).max().unwrap_or(1);
        let q_prime = prime_at_least((n as u64).max(n1));
        debug_assert!(q_prime < 2 * (n as u64).max(n1).max(2));

        let stride = match stride_override {
            Some(p) if p >= 1 => p,
            Some(_) => return param_err("stride must be >= 1"),
            None => d.scaled(3).log2_threshold(n).max(1),
        };
        let windows = build_windows(n, stride);
        for w in &windows {
            if w.len() < 3 {
                return param_err(format!(
                    "window {w} is too short for a two-deletion sketch; increase the stride"
                ));
            }
        }
        let mut xi1: BTreeMap<usize, Arc<Xi1Sketch>> = BTreeMap::new();
        for w in &windows {
            let len = w.len();
            if xi1.contains_key(&len) {
                continue;
            }
            let row_sketch: Arc<dyn Sketch> = Arc::new(ColoringSketch::build(
                2,
                len,
                2,
                1,
                DomainSpec::Full,
                cap,
                cache_dir,
            )?);
            xi1.insert(len, Arc::new(Xi1Sketch::new(q, len, row_sketch)?));
        }
        let n2 = xi1.values().map(|s| s.label_space()).max().unwrap_or(1);

        Ok(Arc::new(C2Params {
            q,
            n,
            d,
            backend,
            window_len,
            max_run,
            eta,
            run_sketches,
            n1,
            q_prime,
            stride,
            windows,
            xi1,
            n2,
        }))
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    /// Regularity window length over the whole word.
    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Longest run an admissible word can carry.
    pub fn max_run(&self) -> usize {
        self.max_run
    }

    pub fn q_prime(&self) -> u64 {
        self.q_prime
    }

    pub fn window_label_bound(&self) -> u64 {
        self.n2
    }

    pub fn eta_label_space(&self) -> u64 {
        self.eta.label_space()
    }

    pub fn windows(&self) -> &[Interval] {
        &self.windows
    }

    pub fn syndrome_bits(&self) -> f64 {
        (self.eta.label_space() as f64).log2()
            + (2.0 * self.n1 as f64).log2()
            + (self.q_prime as f64).log2()
            + 2.0 * (self.n2 as f64).log2()
    }

    fn check_word(&self, x: &Word) -> Result<()> {
        if x.q() != self.q || x.len() != self.n {
            return Err(CodeError::InvalidWord(format!(
                "expected word of length {} over Σ_{}",
                self.n, self.q
            )));
        }
        Ok(())
    }

    pub fn regular(&self, x: &Word) -> Result<bool> {
        self.check_word(x)?;
        Ok(is_regular(x, self.d))
    }

    fn run_label(&self, seg: &Word) -> Result<u64> {
        let sketch = self.run_sketches.get(&seg.len()).ok_or_else(|| {
            CodeError::ContractViolation(format!(
                "no single-deletion sketch for run length {} (run too long for regularity)",
                seg.len()
            ))
        })?;
        sketch.label(seg)
    }

    /// Run syndromes `(f0, f1)` over the runs of `u(x)`.
    pub fn run_syndromes(&self, x: &Word) -> Result<(u64, u64)> {
        self.check_word(x)?;
        if !is_regular(x, self.d) {
            return Err(CodeError::ContractViolation("word is not d-regular".into()));
        }
        let profile = run_profile(&u_word(x))?;
        let mut f0 = 0u64;
        let mut f1 = 0u128;
        let two_n1 = 2 * self.n1;
        for j in 1..=profile.r() {
            let label = self.run_label(&x.substring(profile.run(j)))?;
            f0 = (f0 + label) % two_n1;
            f1 = (f1 + (j as u128) * (label as u128)) % self.q_prime as u128;
        }
        Ok((f0, f1 as u64))
    }

    pub fn syndrome(&self, x: &Word) -> Result<C2Syndrome> {
        let (f0, f1) = self.run_syndromes(x)?;
        let eta = self.eta.label(&u_word(x))?;
        let (mut h0, mut h1) = (0u64, 0u64);
        for (idx, w) in self.windows.iter().enumerate() {
            let j = idx + 1;
            let g = self.xi1[&w.len()].label(&x.substring(*w))? % self.n2;
            if j % 2 == 0 {
                h0 = (h0 + g) % self.n2;
            } else {
                h1 = (h1 + g) % self.n2;
            }
        }
        Ok(C2Syndrome {
            eta,
            f0,
            f1,
            h0,
            h1,
        })
    }

    pub fn classes(&self, cap: u64) -> Result<Vec<(C2Syndrome, Vec<Word>)>> {
        let total = (self.q as u128)
            .checked_pow(self.n as u32)
            .ok_or_else(|| CodeError::CapExceeded("q^n overflow".into()))?;
        if total > cap as u128 {
            return Err(CodeError::CapExceeded(format!(
                "enumerating {total} words exceeds cap {cap}"
            )));
        }
        let mut order: Vec<C2Syndrome> = Vec::new();
        let mut classes: BTreeMap<C2Syndrome, Vec<Word>> = BTreeMap::new();
        for x in all_words(self.q, self.n) {
            if !is_regular(&x, self.d) {
                continue;
            }
            let syn = self.syndrome(&x)?;
            classes
                .entry(syn)
                .or_insert_with(|| {
                    order.push(syn);
                    Vec::new()
                })
                .push(x);
        }
        Ok(order
            .into_iter()
            .map(|syn| {
                let members = classes.remove(&syn).unwrap();
                (syn, members)
            })
            .collect())
    }

    pub fn best_class(&self, cap: u64) -> Result<(C2Syndrome, Vec<Word>)> {
        self.classes(cap)?
            .into_iter()
            .max_by_key(|(_, members)| members.len())
            .ok_or_else(|| {
                CodeError::InvalidParameter("no regular words at these parameters".into())
            })
    }
}

fn build_windows(n: usize, stride: usize) -> Vec<Interval> {
    let count = (n.div_ceil(stride)).saturating_sub(1).max(1);
    (1..=count)
        .map(|j| {
            let lo = (j - 1) * stride + 1;
            let hi = if j == count { n } else { (j + 1) * stride };
            Interval::new(lo, hi.min(n))
        })
        .collect()
}

#[derive(Clone)]
pub struct C2Code {
    pub params: Arc<C2Params>,
    pub target: C2Syndrome,
}

impl C2Code {
    pub fn new(params: Arc<C2Params>, target: C2Syndrome) -> Self {
        C2Code { params, target }
    }

    pub fn contains(&self, x: &Word) -> Result<bool> {
        if !self.params.regular(x)? {
            return Ok(false);
        }
        Ok(self.params.syndrome(x)? == self.target)
    }

    pub fn enumerate(&self, cap: u64) -> Result<Vec<Word>> {
        Ok(self
            .params
            .classes(cap)?
            .into_iter()
            .find(|(syn, _)| *syn == self.target)
            .map(|(_, members)| members)
            .unwrap_or_default())
    }

    pub fn decode(&self, y: &Word) -> Result<(Word, DecodeBranch)> {
        let p = &*self.params;
        if y.q() != p.q || y.len() + 2 != p.n {
            return Err(CodeError::InvalidWord(format!(
                "corrupted word must have length {} over Σ_{}",
                p.n - 2,
                p.q
            )));
        }
        let u_corrupted = u_word(y);
        let u_row = p.eta.decode(&u_corrupted, self.target.eta)?;
        let profile = run_profile(&u_row)?;
        let loc = localize_binary_pair(&u_row, &u_corrupted, p.d)?;
        let (x, branch) = match demote_adjacent(loc, &profile) {
            Localization::RunPair { j1, j2 } => (
                self.decode_run_pair(y, &profile, j1, j2)?,
                DecodeBranch::RunPair,
            ),
            Localization::Window(iv) => (self.decode_window(y, iv)?, DecodeBranch::Window),
        };
        if !self.contains(&x)? {
            return Err(CodeError::DecodeFailure(
                "reassembled word is not in the sieve class".into(),
            ));
        }
        if !(y.is_subsequence_of(&x)) {
            return Err(CodeError::DecodeFailure(
                "corrupted word is not a two-deletion result of the decoded word".into(),
            ));
        }
        Ok((x, branch))
    }

    /// Case (1): one deletion in run `j1`, one in run `j2`, `j2 - j1 >= 2`.
    fn decode_run_pair(
        &self,
        y: &Word,
        profile: &RunProfile,
        j1: usize,
        j2: usize,
    ) -> Result<Word> {
        let p = &*self.params;
        let pj = |idx: usize| profile.boundary(idx);
        let known = |k: usize| -> Option<u32> {
            if k <= pj(j1 - 1) {
                Some(y.at1(k))
            } else if k > pj(j1) && k <= pj(j2 - 1) {
                Some(y.at1(k - 1))
            } else if k > pj(j2) {
                Some(y.at1(k - 2))
            } else {
                None
            }
        };
        // run labels of the untouched runs
        let two_n1 = 2 * p.n1;
        let qp = p.q_prime as u128;
        let mut sum0 = 0u64;
        let mut sum1 = 0u128;
        for j in (1..=profile.r()).filter(|&j| j != j1 && j != j2) {
            let symbols: Option<Vec<u32>> = profile.run(j).iter().map(&known).collect();
            let seg = Word::new(
                p.q,
                symbols
                    .ok_or_else(|| CodeError::DecodeFailure(format!("run {j} not fully known")))?,
            )?;
            let label = p.run_label(&seg)?;
            sum0 = (sum0 + label) % two_n1;
            sum1 = (sum1 + j as u128 * label as u128) % qp;
        }
        let delta0 = (self.target.f0 + two_n1 - sum0) % two_n1;
        let delta1 = (self.target.f1 as u128 + qp - sum1) % qp;
        // solve D1 + D2 = δ0 (exact) and j1·D1 + j2·D2 ≡ δ1 (mod Q)
        let j1q = j1 as u128 % qp;
        let j2q = j2 as u128 % qp;
        debug_assert!(j1q != j2q, "run indices below Q are distinct mod Q");
        let diff = (j2q + qp - j1q) % qp;
        let inv = mod_inverse(diff, qp).ok_or_else(|| {
            CodeError::DecodeFailure("singular run system; indices collide mod Q".into())
        })?;
        let rhs = (delta1 + qp * qp - j1q * (delta0 as u128 % qp)) % qp;
        let d2 = (rhs * inv) % qp;
        if d2 >= p.n1 as u128 {
            return Err(CodeError::DecodeFailure(format!(
                "recovered run label {d2} outside [0, N1)"
            )));
        }
        let d1 = (delta0 as u128)
            .checked_sub(d2)
            .ok_or_else(|| CodeError::DecodeFailure("run pair labels inconsistent".into()))?;
        if d1 >= p.n1 as u128 {
            return Err(CodeError::DecodeFailure(format!(
                "recovered run label {d1} outside [0, N1)"
            )));
        }

        // redecode both hit runs from their shifted substrings
        let seg = |lo: usize, hi: usize| -> Word {
            if hi < lo {
                Word::new(p.q, Vec::new()).unwrap()
            } else {
                y.substring(Interval::new(lo, hi))
            }
        };
        let run1 = profile.run(j1);
        let run2 = profile.run(j2);
        let rec1 = self.run_sketch_decode(run1.len(), &seg(pj(j1 - 1) + 1, pj(j1) - 1), d1 as u64)?;
        let rec2 = self.run_sketch_decode(run2.len(), &seg(pj(j2 - 1), pj(j2) - 2), d2 as u64)?;

        let mut symbols: Vec<Option<u32>> = vec![None; p.n];
        for (offset, k) in run1.iter().enumerate() {
            symbols[k - 1] = Some(rec1.get(offset));
        }
        for (offset, k) in run2.iter().enumerate() {
            symbols[k - 1] = Some(rec2.get(offset));
        }
        for k in 1..=p.n {
            if symbols[k - 1].is_none() {
                symbols[k - 1] = Some(known(k).ok_or_else(|| {
                    CodeError::DecodeFailure(format!("position {k} unexpectedly unknown"))
                })?);
            }
        }
        Word::new(p.q, symbols.into_iter().map(Option::unwrap).collect())
    }

    fn run_sketch_decode(&self, len: usize, corrupted: &Word, label: u64) -> Result<Word> {
        let sketch = self.params.run_sketches.get(&len).ok_or_else(|| {
            CodeError::DecodeFailure(format!("no single-deletion sketch for run length {len}"))
        })?;
        if label >= sketch.label_space() {
            return Err(CodeError::DecodeFailure(format!(
                "run label {label} outside the sketch space {}",
                sketch.label_space()
            )));
        }
        sketch.decode(corrupted, label)
    }

    /// Case (2): both deletions inside one interval of `[n]`.
    fn decode_window(&self, y: &Word, iv: Interval) -> Result<Word> {
        let p = &*self.params;
        let j0 = (1..=p.windows.len())
            .find(|&j| p.windows[j - 1].contains_interval(iv))
            .ok_or_else(|| {
                CodeError::ContractViolation(format!("no window covers the interval {iv}"))
            })?;
        let window = p.windows[j0 - 1];
        let (d1, d2) = (window.lo(), window.hi());
        let target_h = if j0 % 2 == 0 {
            self.target.h0
        } else {
            self.target.h1
        };
        let mut others = 0u64;
        for j in (1..=p.windows.len()).filter(|&j| j % 2 == j0 % 2 && j != j0) {
            let w = p.windows[j - 1];
            debug_assert!(!w.intersects(window));
            let symbols: Vec<u32> = w
                .iter()
                .map(|k| if k < d1 { y.at1(k) } else { y.at1(k - 2) })
                .collect();
            let g = p.xi1[&w.len()].label(&Word::new(p.q, symbols)?)? % p.n2;
            others = (others + g) % p.n2;
        }
        let g_j0 = (target_h + p.n2 - others) % p.n2;
        let xi1 = &p.xi1[&window.len()];
        if g_j0 >= xi1.label_space() {
            return Err(CodeError::DecodeFailure(
                "recovered window label outside its space".into(),
            ));
        }
        let corrupted_window = if d2 >= d1 + 2 {
            y.substring(Interval::new(d1, d2 - 2))
        } else {
            Word::new(p.q, Vec::new())?
        };
        let decoded_window = xi1.decode(&corrupted_window, g_j0)?;
        let mut symbols = Vec::with_capacity(p.n);
        for k in 1..=p.n {
            if k < d1 {
                symbols.push(y.at1(k));
            } else if k <= d2 {
                symbols.push(decoded_window.get(k - d1));
            } else {
                symbols.push(y.at1(k - 2));
            }
        }
        Word::new(p.q, symbols)
    }
}

fn mod_inverse(a: u128, modulus: u128) -> Option<u128> {
    // modulus is prime; Fermat inverse
    if a == 0 {
        return None;
    }
    Some(mod_pow(a, modulus - 2, modulus))
}

fn mod_pow(mut base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}
