//! The Tenengolts single-deletion sketch for non-binary alphabets.
//!
//! Label = (symbol sum mod q, VT-style syndrome of the ascent signature).
//! The signature `α` has `α_1 = 1` and `α_i = [x_i >= x_{i-1}]`; its weighted
//! sum `Σ (i-1)·α_i` is taken mod `m`. Decoding recovers the deleted value
//! from the symbol sum and then scans the `m` insertion positions for the
//! unique word matching the full label.

use std::collections::BTreeSet;

use crate::error::{param_err, CodeError, Result};
use crate::seq::Word;
use crate::sketch::Sketch;

#[derive(Clone, Debug)]
pub struct TenengoltsSketch {
    q: u32,
    m: usize,
}

impl TenengoltsSketch {
    pub fn new(q: u32, m: usize) -> Result<Self> {
        if q < 2 {
            return param_err("Tenengolts sketch needs q >= 2");
        }
        if m == 0 {
            return param_err("Tenengolts sketch needs m >= 1");
        }
        Ok(TenengoltsSketch { q, m })
    }

    fn signature_syndrome(&self, x: &Word) -> u64 {
        let mut acc = 0u64;
        for i in 2..=x.len() {
            if x.at1(i) >= x.at1(i - 1) {
                acc += (i - 1) as u64;
            }
        }
        acc % self.m as u64
    }

    fn symbol_sum(&self, x: &Word) -> u64 {
        x.symbols().iter().map(|&s| s as u64).sum::<u64>() % self.q as u64
    }
}

impl Sketch for TenengoltsSketch {
    fn label_space(&self) -> u64 {
        self.q as u64 * self.m as u64
    }

    fn label(&self, x: &Word) -> Result<u64> {
        if x.q() != self.q || x.len() != self.m {
            return Err(CodeError::InvalidWord(format!(
                "expected word of length {} over Σ_{}",
                self.m, self.q
            )));
        }
        Ok(self.signature_syndrome(x) * self.q as u64 + self.symbol_sum(x))
    }

    fn decode(&self, corrupted: &Word, label: u64) -> Result<Word> {
        if corrupted.q() != self.q || corrupted.len() != self.m - 1 {
            return Err(CodeError::InvalidWord(format!(
                "expected corrupted length {} over Σ_{}",
                self.m - 1,
                self.q
            )));
        }
        if label >= self.label_space() {
            return Err(CodeError::DecodeFailure("label out of range".into()));
        }
        let target_sum = label % self.q as u64;
        let got: u64 = corrupted.symbols().iter().map(|&s| s as u64).sum();
        let value = ((target_sum + self.q as u64 - got % self.q as u64) % self.q as u64) as u32;
        let mut matches: BTreeSet<Word> = BTreeSet::new();
        for pos in 0..=corrupted.len() {
            let mut symbols = corrupted.symbols().to_vec();
            symbols.insert(pos, value);
            let candidate = Word::new(self.q, symbols)?;
            if self.label(&candidate)? == label {
                matches.insert(candidate);
            }
        }
        match matches.len() {
            1 => Ok(matches.into_iter().next().unwrap()),
            0 => Err(CodeError::DecodeFailure(
                "no word consistent with label".into(),
            )),
            n => Err(CodeError::DecodeFailure(format!(
                "{n} distinct words share the label; sketch contract broken"
            ))),
        }
    }

    fn describe(&self) -> String {
        format!("tenengolts(q={}, m={})", self.q, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ball;
    use crate::seq::all_words;

    #[test]
    fn exhaustive_roundtrip_q3() {
        for m in 2..=9usize {
            let s = TenengoltsSketch::new(3, m).unwrap();
            for x in all_words(3, m) {
                let label = s.label(&x).unwrap();
                for y in ball(&x, 1, 1).unwrap() {
                    assert_eq!(s.decode(&y, label).unwrap(), x, "x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn exhaustive_roundtrip_q4_q5() {
        for (q, m) in [(4u32, 6usize), (5, 5)] {
            let s = TenengoltsSketch::new(q, m).unwrap();
            for x in all_words(q, m) {
                let label = s.label(&x).unwrap();
                for y in ball(&x, 1, 1).unwrap() {
                    assert_eq!(s.decode(&y, label).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn constant_word_roundtrip() {
        let s = TenengoltsSketch::new(3, 6).unwrap();
        let c = Word::new(3, vec![2; 6]).unwrap();
        let label = s.label(&c).unwrap();
        let y = Word::new(3, vec![2; 5]).unwrap();
        assert_eq!(s.decode(&y, label).unwrap(), c);
    }

    #[test]
    fn label_space_bound() {
        for m in 1..=9usize {
            let s = TenengoltsSketch::new(3, m).unwrap();
            assert!(s.label_space() <= 3 * (m as u64 + 1));
        }
    }

    #[test]
    fn length_one_segments_have_injective_labels() {
        let s = TenengoltsSketch::new(5, 1).unwrap();
        let labels: BTreeSet<u64> = all_words(5, 1).map(|x| s.label(&x).unwrap()).collect();
        assert_eq!(labels.len(), 5);
    }
}
