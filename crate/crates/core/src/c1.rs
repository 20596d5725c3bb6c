//! The sieve code correcting two bursts of exactly `b` deletions.
//!
//! A codeword is any word whose first array row is d-regular and whose four
//! syndromes hit the class targets:
//!
//! * `eta` — label of the binary first row of `U(x) = A(u(x), n, b)` under an
//!   η-role two-deletion sketch on regular words;
//! * `f` — the two-burst-erasure syndrome of the padded segment-label vector
//!   `φ̄(x) = (φ(0^b), φ(x_{I_1'}), ..., φ(x_{I_r'}), 0, ...)`, where `φ` is a
//!   single-b-burst sketch applied per run segment;
//! * `h0`, `h1` — parity-class sums of per-window tuples of ξ1 labels over
//!   the array rows, with window stride `P = 3db·log2(n/b) + 1`.
//!
//! Decoding recovers the first u-row, localizes the bursts to either a pair
//! of distant runs (patched via the erasure decoder plus per-segment burst
//! decoding) or one short column window (patched via the recovered window
//! tuple), then verifies the full syndrome before returning.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::channel::{apply_bursts, two_burst_patterns, ErasedWord};
use crate::erasure::{erasure_decode, erasure_syndrome, ErasureSyndrome};
use crate::error::{param_err, CodeError, Result};
use crate::localize::{demote_adjacent, localize_binary_pair, Localization};
use crate::ratio::Ratio;
use crate::seq::{
    all_words, array_rep_any, is_regular, regular_window_len, run_profile, ArrayRep, Interval,
    RunProfile, Word,
};
use crate::sketch::{
    pack_radix, total_space, unpack_radix, BackendKind, ColoringSketch, DomainSpec,
    RowwiseBurstSketch, Sketch, Xi1Sketch,
};

/// Which decoder path resolved a corruption.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecodeBranch {
    RunPair,
    Window,
}

/// Syndrome tuple of the code; classes are its fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct C1Syndrome {
    pub eta: u64,
    pub f: (u64, u64, u64),
    pub h0: u64,
    pub h1: u64,
}

impl C1Syndrome {
    fn f_syn(&self) -> ErasureSyndrome {
        ErasureSyndrome {
            a1: self.f.0,
            a2: self.f.1,
            w: self.f.2,
        }
    }
}

pub struct C1Params {
    pub q: u32,
    pub n: usize,
    pub b: usize,
    pub d: Ratio,
    pub backend: BackendKind,
    m_cols: usize,
    padded_len: usize,
    window_len: usize,
    max_run: usize,
    pub stride: usize,
    windows: Vec<Interval>,
    eta: Arc<ColoringSketch>,
    phi: BTreeMap<usize, Arc<dyn Sketch>>,
    seg_bound: u64,
    xi1: BTreeMap<usize, Arc<Xi1Sketch>>,
    n2: u64,
}

impl C1Params {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        q: u32,
        n: usize,
        b: usize,
        d: Ratio,
        backend: BackendKind,
        stride_override: Option<usize>,
        cap: u64,
        cache_dir: Option<&std::path::Path>,
    ) -> Result<Arc<Self>> {
        if q < 2 {
            return param_err("alphabet size must be >= 2");
        }
        if b < 2 {
            return param_err("burst length must satisfy b > 1");
        }
        if n <= 2 * b {
            return param_err("length must satisfy n > 2b");
        }
        let m_cols = n.div_ceil(b);
        let padded_len = m_cols * b;
        let window_len = regular_window_len(m_cols, d);
        let max_run = if window_len > m_cols {
            m_cols
        } else {
            window_len.saturating_sub(1)
        };

        let eta = Arc::new(ColoringSketch::build(
            2,
            m_cols,
            2,
            1,
            DomainSpec::Regular(d),
            cap,
            cache_dir,
        )?);

        let mut phi: BTreeMap<usize, Arc<dyn Sketch>> = BTreeMap::new();
        for run_len in 1..=max_run {
            let seg_len = run_len * b;
            let sketch: Arc<dyn Sketch> = if backend == BackendKind::Constructive || seg_len == b {
                // a whole-segment burst leaves nothing to decode from; the
                // row-wise labels are injective there, which is required
                Arc::new(RowwiseBurstSketch::new(q, seg_len, b)?)
            } else {
                Arc::new(ColoringSketch::build(
                    q,
                    seg_len,
                    1,
                    b,
                    DomainSpec::Full,
                    cap,
                    cache_dir,
                )?)
            };
            phi.insert(seg_len, sketch);
        }
        let seg_bound = phi.values().map(|s| s.label_space()).max().unwrap_or(1);
        if seg_bound > u32::MAX as u64 {
            return param_err("segment label space exceeds u32");
        }

        let stride = match stride_override {
            Some(p) if p >= 1 => p,
            Some(_) => return param_err("stride must be >= 1"),
            None => d.scaled(3 * b as u32).log2_threshold(m_cols) + 1,
        };
        let windows = build_windows(m_cols, stride);
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
        let g_rows = if q == 2 { b - 1 } else { b };
        let n2 = windows
            .iter()
            .map(|w| {
                let space = xi1[&w.len()].label_space();
                total_space(&vec![space; g_rows])
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(1);

        Ok(Arc::new(C1Params {
            q,
            n,
            b,
            d,
            backend,
            m_cols,
            padded_len,
            window_len,
            max_run,
            stride,
            windows,
            eta,
            phi,
            seg_bound,
            xi1,
            n2,
        }))
    }

    pub fn m_cols(&self) -> usize {
        self.m_cols
    }

    /// Regularity window length for the first array row.
    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Longest run an admissible first row can carry.
    pub fn max_run(&self) -> usize {
        self.max_run
    }

    pub fn windows(&self) -> &[Interval] {
        &self.windows
    }

    pub fn seg_label_bound(&self) -> u64 {
        self.seg_bound
    }

    pub fn window_label_bound(&self) -> u64 {
        self.n2
    }

    pub fn eta_label_space(&self) -> u64 {
        self.eta.label_space()
    }

    /// Rows that participate in the window tuples `g_j`.
    fn g_rows(&self) -> Vec<usize> {
        if self.q == 2 {
            (2..=self.b).collect()
        } else {
            (1..=self.b).collect()
        }
    }

    /// log2 of the number of syndrome tuples: the honest redundancy cost of
    /// the sieve at these parameters.
    pub fn syndrome_bits(&self) -> f64 {
        let f_space = 4.0
            * (self.seg_bound as f64).powi(2)
            * ((self.m_cols + 1) as f64)
            * (self.seg_bound as f64).powi(2);
        (self.eta.label_space() as f64).log2() + f_space.log2() + 2.0 * (self.n2 as f64).log2()
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

    /// Is the first array row d-regular?
    pub fn row_regular(&self, x: &Word) -> Result<bool> {
        self.check_word(x)?;
        let a = array_rep_any(x, self.b);
        Ok(is_regular(a.row(1), self.d))
    }

    /// The padded segment-label vector `φ̄(x)`, length `n/b + 1` over
    /// `[0, N-1]`: entry 1 labels the virtual segment `0^b`, entry `j+1`
    /// labels `x_{I_j'}`, and the tail is zero padded.
    pub fn segment_vector(&self, x: &Word) -> Result<Word> {
        self.check_word(x)?;
        let padded = x.zero_pad_to_multiple(self.b);
        let a = array_rep_any(x, self.b);
        let row1 = a.row(1);
        if !is_regular(row1, self.d) {
            return Err(CodeError::ContractViolation(
                "first array row is not d-regular".into(),
            ));
        }
        let profile = run_profile(&crate::seq::u_word(row1))?;
        let mut entries = Vec::with_capacity(self.m_cols + 1);
        entries.push(self.phi_label(&Word::zeros(self.q, self.b))? as u32);
        for j in 1..=profile.r() {
            let seg = padded.substring(profile.i_prime(j, self.b));
            entries.push(self.phi_label(&seg)? as u32);
        }
        entries.resize(self.m_cols + 1, 0);
        Word::new((self.seg_bound as u32).max(2), entries)
    }

    fn phi_label(&self, seg: &Word) -> Result<u64> {
        let sketch = self.phi.get(&seg.len()).ok_or_else(|| {
            CodeError::ContractViolation(format!(
                "no φ-role sketch for segment length {} (run too long for regularity)",
                seg.len()
            ))
        })?;
        sketch.label(seg)
    }

    fn phi_decode(&self, seg_len: usize, corrupted: &Word, label: u64) -> Result<Word> {
        let sketch = self.phi.get(&seg_len).ok_or_else(|| {
            CodeError::DecodeFailure(format!("no φ-role sketch for segment length {seg_len}"))
        })?;
        if label >= sketch.label_space() {
            return Err(CodeError::DecodeFailure(format!(
                "recovered segment label {label} outside the φ space {}",
                sketch.label_space()
            )));
        }
        sketch.decode(corrupted, label)
    }

    /// Window tuple `g_j` of ξ1 labels over the participating rows.
    fn g_tuple(&self, rows: &[Word], j: usize) -> Result<u64> {
        let window = self.windows[j - 1];
        let xi1 = &self.xi1[&window.len()];
        let mut labels = Vec::new();
        let mut spaces = Vec::new();
        for &i in &self.g_rows() {
            labels.push(xi1.label(&rows[i - 1].substring(window))?);
            spaces.push(xi1.label_space());
        }
        pack_radix(&labels, &spaces)
    }

    /// Full syndrome of a codeword candidate.
    pub fn syndrome(&self, x: &Word) -> Result<C1Syndrome> {
        self.check_word(x)?;
        let a = array_rep_any(x, self.b);
        if !is_regular(a.row(1), self.d) {
            return Err(CodeError::ContractViolation(
                "first array row is not d-regular".into(),
            ));
        }
        let u_row1 = crate::seq::u_word(a.row(1));
        let eta = self.eta.label(&u_row1)?;
        let phi_bar = self.segment_vector(x)?;
        let f = erasure_syndrome(&phi_bar, self.seg_bound as u32)?;
        let (mut h0, mut h1) = (0u64, 0u64);
        for j in 1..=self.windows.len() {
            let g = self.g_tuple(a.rows(), j)? % self.n2;
            if j % 2 == 0 {
                h0 = (h0 + g) % self.n2;
            } else {
                h1 = (h1 + g) % self.n2;
            }
        }
        Ok(C1Syndrome {
            eta,
            f: (f.a1, f.a2, f.w),
            h0,
            h1,
        })
    }

    /// Group all regular words by syndrome. Returns classes in first-seen
    /// order along with their members.
    pub fn classes(&self, cap: u64) -> Result<Vec<(C1Syndrome, Vec<Word>)>> {
        let total = (self.q as u128)
            .checked_pow(self.n as u32)
            .ok_or_else(|| CodeError::CapExceeded("q^n overflow".into()))?;
        if total > cap as u128 {
            return Err(CodeError::CapExceeded(format!(
                "enumerating {total} words exceeds cap {cap}"
            )));
        }
        let mut order: Vec<C1Syndrome> = Vec::new();
        let mut classes: BTreeMap<C1Syndrome, Vec<Word>> = BTreeMap::new();
        for x in all_words(self.q, self.n) {
            if !self.row_regular(&x)? {
                continue;
            }
            let syn = self.syndrome(&x)?;
            let entry = classes.entry(syn).or_insert_with(|| {
                order.push(syn);
                Vec::new()
            });
            entry.push(x);
        }
        Ok(order
            .into_iter()
            .map(|syn| {
                let members = classes.remove(&syn).unwrap();
                (syn, members)
            })
            .collect())
    }

    /// Largest class; ties broken by first appearance in lexicographic scan.
    pub fn best_class(&self, cap: u64) -> Result<(C1Syndrome, Vec<Word>)> {
        let classes = self.classes(cap)?;
        classes
            .into_iter()
            .max_by_key(|(_, members)| members.len())
            .ok_or_else(|| {
                CodeError::InvalidParameter("no regular words at these parameters".into())
            })
    }
}

fn build_windows(m_cols: usize, stride: usize) -> Vec<Interval> {
    let count = (m_cols.div_ceil(stride)).saturating_sub(1).max(1);
    (1..=count)
        .map(|j| {
            let lo = (j - 1) * stride + 1;
            let hi = if j == count { m_cols } else { (j + 1) * stride };
            Interval::new(lo, hi.min(m_cols))
        })
        .collect()
}

/// A fixed class of the sieve: parameters plus target syndrome.
#[derive(Clone)]
pub struct C1Code {
    pub params: Arc<C1Params>,
    pub target: C1Syndrome,
}

impl C1Code {
    pub fn new(params: Arc<C1Params>, target: C1Syndrome) -> Self {
        C1Code { params, target }
    }

    pub fn contains(&self, x: &Word) -> Result<bool> {
        if !self.params.row_regular(x)? {
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

    /// Decode a word hit by two disjoint b-bursts.
    pub fn decode(&self, y: &Word) -> Result<(Word, DecodeBranch)> {
        let p = &*self.params;
        if y.q() != p.q || y.len() != p.n - 2 * p.b {
            return Err(CodeError::InvalidWord(format!(
                "corrupted word must have length {} over Σ_{}",
                p.n - 2 * p.b,
                p.q
            )));
        }
        let ay = array_rep_any(y, p.b);
        let u_row_corrupted = crate::seq::u_word(ay.row(1));
        let row1_u = p.eta.decode(&u_row_corrupted, self.target.eta)?;
        let profile = run_profile(&row1_u)?;
        let loc = localize_binary_pair(&row1_u, &u_row_corrupted, p.d)?;
        let (x, branch) = match demote_adjacent(loc, &profile) {
            Localization::RunPair { j1, j2 } => (
                self.decode_run_pair(y, &profile, j1, j2)?,
                DecodeBranch::RunPair,
            ),
            Localization::Window(cols) => (
                self.decode_window(&ay, &row1_u, cols)?,
                DecodeBranch::Window,
            ),
        };
        if !self.contains(&x)? {
            return Err(CodeError::DecodeFailure(
                "reassembled word is not in the sieve class".into(),
            ));
        }
        let in_ball = two_burst_patterns(p.n, p.b)
            .iter()
            .any(|pat| apply_bursts(&x, pat).map(|z| &z == y).unwrap_or(false));
        if !in_ball {
            return Err(CodeError::DecodeFailure(
                "corrupted word is not a two-burst result of the decoded word".into(),
            ));
        }
        Ok((x, branch))
    }

    /// Case (1): bursts confined to runs `j1 < j2` with `j2 - j1 >= 2`.
    fn decode_run_pair(
        &self,
        y: &Word,
        profile: &RunProfile,
        j1: usize,
        j2: usize,
    ) -> Result<Word> {
        let p = &*self.params;
        debug_assert!(j2 >= j1 + 2);
        let r = profile.r();
        let b = p.b;
        let y_padded = y.zero_pad_to_multiple(b);
        let pb = |idx: usize| profile.boundary(idx) * b;

        // positions known from the corrupted word, in padded coordinates
        let zone1_hi = if pb(j1 - 1) >= b {
            pb(j1 - 1) - b + 1
        } else {
            0
        };
        let zone2 = (
            pb(j1) + 1,
            if pb(j2 - 1) >= b {
                pb(j2 - 1) - b + 1
            } else {
                0
            },
        );
        let zone3_lo = pb(j2) + 1;
        let known = |k: usize| -> Option<u32> {
            if k <= zone1_hi {
                Some(y_padded.at1(k))
            } else if k >= zone2.0 && k <= zone2.1 {
                Some(y_padded.at1(k - b))
            } else if k >= zone3_lo {
                Some(y_padded.at1(k - 2 * b))
            } else {
                None
            }
        };

        // segment labels for every run not adjacent to the bursts
        let erased_positions = [j1, j1 + 1, j2, j2 + 1];
        let mut cells: Vec<Option<u32>> = Vec::with_capacity(p.m_cols + 1);
        for pos in 1..=(p.m_cols + 1) {
            if erased_positions.contains(&pos) {
                cells.push(None);
                continue;
            }
            let value = if pos == 1 {
                p.phi_label(&Word::zeros(p.q, b))? as u32
            } else if pos <= r + 1 {
                let j = pos - 1;
                let iv = profile.i_prime(j, b);
                let symbols: Option<Vec<u32>> = iv.iter().map(&known).collect();
                let seg = Word::new(
                    p.q,
                    symbols.ok_or_else(|| {
                        CodeError::DecodeFailure(format!("segment {j} not fully known"))
                    })?,
                )?;
                p.phi_label(&seg)? as u32
            } else {
                0
            };
            cells.push(Some(value));
        }
        let erased = ErasedWord::from_cells((p.seg_bound as u32).max(2), cells)?;
        let phi_bar = erasure_decode(&erased, &self.target.f_syn(), p.seg_bound as u32)?;

        // decode the four unknown segments from their corrupted substrings
        let mut x_padded: Vec<Option<u32>> = vec![None; p.padded_len];
        let mut place = |iv: Interval, seg: &Word| {
            for (offset, k) in iv.iter().enumerate() {
                x_padded[k - 1] = Some(seg.get(offset));
            }
        };
        let sub = |lo: usize, hi: usize| -> Word {
            if hi < lo {
                Word::new(p.q, Vec::new()).unwrap()
            } else {
                y_padded.substring(Interval::new(lo, hi))
            }
        };
        let targets = [
            (
                j1 - 1,
                if j1 >= 2 {
                    Some((pb(j1 - 2) + 1, pb(j1 - 1) - b))
                } else {
                    None
                },
            ),
            (j1, Some((pb(j1 - 1) + 1, pb(j1) - b))),
            (j2 - 1, Some((pb(j2 - 2) + 1 - b, pb(j2 - 1) - 2 * b))),
            (j2, Some((pb(j2 - 1) + 1 - b, pb(j2) - 2 * b))),
        ];
        for (j, range) in targets {
            let label = phi_bar.at1(j + 1) as u64;
            if j == 0 {
                // virtual segment: check the recovered label for consistency
                if label != p.phi_label(&Word::zeros(p.q, b))? {
                    return Err(CodeError::DecodeFailure(
                        "virtual segment label mismatch".into(),
                    ));
                }
                continue;
            }
            let (lo, hi) = range.expect("real segments have substring ranges");
            let iv = profile.i_prime(j, b);
            let seg = p.phi_decode(iv.len(), &sub(lo, hi), label)?;
            place(iv, &seg);
        }
        // fill the known segments
        for j in 1..=r {
            if [j1 - 1, j1, j2 - 1, j2].contains(&j) {
                continue;
            }
            for k in profile.i_prime(j, b).iter() {
                let v = known(k).ok_or_else(|| {
                    CodeError::DecodeFailure(format!("position {k} unexpectedly unknown"))
                })?;
                x_padded[k - 1] = Some(v);
            }
        }
        let symbols: Option<Vec<u32>> = x_padded.into_iter().collect();
        let symbols =
            symbols.ok_or_else(|| CodeError::DecodeFailure("decoded word has holes".into()))?;
        if symbols[p.n..].iter().any(|&s| s != 0) {
            return Err(CodeError::DecodeFailure(
                "nonzero padding after decode".into(),
            ));
        }
        Word::new(p.q, symbols[..p.n].to_vec())
    }

    /// Case (2): both bursts inside one column window.
    fn decode_window(&self, ay: &ArrayRep, row1_u: &Word, cols: Interval) -> Result<Word> {
        let p = &*self.params;
        let repair = Interval::new(cols.lo().saturating_sub(1).max(1), cols.hi());
        let j0 = (1..=p.windows.len())
            .find(|&j| p.windows[j - 1].contains_interval(repair))
            .ok_or_else(|| {
                CodeError::ContractViolation(format!(
                    "no window covers the repair interval {repair}"
                ))
            })?;
        let window = p.windows[j0 - 1];
        let (d1, d2) = (window.lo(), window.hi());
        let target_h = if j0 % 2 == 0 {
            self.target.h0
        } else {
            self.target.h1
        };

        // g_j for the same-parity windows, recomputed from the corrupted rows
        let mut others = 0u64;
        for j in (1..=p.windows.len()).filter(|&j| j % 2 == j0 % 2 && j != j0) {
            let w = p.windows[j - 1];
            debug_assert!(!w.intersects(window));
            let xi1 = &p.xi1[&w.len()];
            let mut labels = Vec::new();
            let mut spaces = Vec::new();
            for &i in &p.g_rows() {
                let symbols: Vec<u32> = w
                    .iter()
                    .map(|k| {
                        if k < d1 {
                            ay.row(i).at1(k)
                        } else {
                            ay.row(i).at1(k - 2)
                        }
                    })
                    .collect();
                labels.push(xi1.label(&Word::new(p.q, symbols)?)?);
                spaces.push(xi1.label_space());
            }
            others = (others + pack_radix(&labels, &spaces)? % p.n2) % p.n2;
        }
        let g_j0 = (target_h + p.n2 - others) % p.n2;
        let xi1 = &p.xi1[&window.len()];
        let spaces = vec![xi1.label_space(); p.g_rows().len()];
        if g_j0 >= total_space(&spaces)? {
            return Err(CodeError::DecodeFailure(
                "recovered window tuple outside its label space".into(),
            ));
        }
        let labels = unpack_radix(g_j0, &spaces)?;

        // assemble every row: known outside the window, decoded inside
        let mut rows: Vec<Word> = Vec::with_capacity(p.b);
        let g_rows = p.g_rows();
        for i in 1..=p.b {
            if p.q == 2 && i == 1 {
                rows.push(row1_u.clone());
                continue;
            }
            let slot = g_rows
                .iter()
                .position(|&gi| gi == i)
                .expect("row participates in g");
            let corrupted_window = if d2 >= d1 + 2 {
                ay.row(i).substring(Interval::new(d1, d2 - 2))
            } else {
                Word::new(p.q, Vec::new())?
            };
            let decoded_window = xi1.decode(&corrupted_window, labels[slot])?;
            let mut symbols = Vec::with_capacity(p.m_cols);
            for k in 1..=p.m_cols {
                if k < d1 {
                    symbols.push(ay.row(i).at1(k));
                } else if k <= d2 {
                    symbols.push(decoded_window.get(k - d1));
                } else {
                    symbols.push(ay.row(i).at1(k - 2));
                }
            }
            rows.push(Word::new(p.q, symbols)?);
        }
        ArrayRep::from_rows(rows, p.n)?.into_word()
    }
}
