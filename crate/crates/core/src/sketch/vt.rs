//! The Varshamov–Tenengolts single-deletion sketch for binary words.

use crate::error::{param_err, CodeError, Result};
use crate::seq::Word;
use crate::sketch::Sketch;

/// Binary single-deletion sketch of length `m`: label `Σ i·x_i mod (m+1)`.
#[derive(Clone, Debug)]
pub struct VtSketch {
    m: usize,
}

impl VtSketch {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return param_err("VT sketch needs m >= 1");
        }
        Ok(VtSketch { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check_domain(&self, x: &Word, len: usize) -> Result<()> {
        if x.q() != 2 {
            return Err(CodeError::InvalidWord("VT sketch is binary".into()));
        }
        if x.len() != len {
            return Err(CodeError::InvalidWord(format!(
                "expected length {len}, got {}",
                x.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn vt_syndrome(x: &Word) -> u64 {
    x.symbols()
        .iter()
        .enumerate()
        .map(|(i, &s)| (i as u64 + 1) * s as u64)
        .sum()
}

impl Sketch for VtSketch {
    fn label_space(&self) -> u64 {
        self.m as u64 + 1
    }

    fn label(&self, x: &Word) -> Result<u64> {
        self.check_domain(x, self.m)?;
        Ok(vt_syndrome(x) % (self.m as u64 + 1))
    }

    fn decode(&self, corrupted: &Word, label: u64) -> Result<Word> {
        self.check_domain(corrupted, self.m - 1)?;
        let modulus = self.m as u64 + 1;
        if label >= modulus {
            return Err(CodeError::DecodeFailure("label out of range".into()));
        }
        let deficiency = (label + modulus - vt_syndrome(corrupted) % modulus) % modulus;
        let weight = corrupted.symbols().iter().filter(|&&s| s == 1).count() as u64;
        let mut symbols = corrupted.symbols().to_vec();
        if deficiency <= weight {
            // a 0 was deleted with `deficiency` ones to its right
            let mut ones_seen = 0;
            let mut insert_at = symbols.len();
            for (idx, &s) in symbols.iter().enumerate().rev() {
                if ones_seen == deficiency {
                    break;
                }
                if s == 1 {
                    ones_seen += 1;
                    insert_at = idx;
                }
            }
            if ones_seen != deficiency {
                return Err(CodeError::DecodeFailure("no consistent 0-insertion".into()));
            }
            symbols.insert(insert_at, 0);
        } else {
            // a 1 was deleted with `deficiency - weight - 1` zeros to its left
            let zeros_left = deficiency - weight - 1;
            let mut zeros_seen = 0;
            let mut insert_at = None;
            if zeros_left == 0 {
                insert_at = Some(0);
            } else {
                for (idx, &s) in symbols.iter().enumerate() {
                    if s == 0 {
                        zeros_seen += 1;
                        if zeros_seen == zeros_left {
                            insert_at = Some(idx + 1);
                            break;
                        }
                    }
                }
            }
            let insert_at = insert_at
                .ok_or_else(|| CodeError::DecodeFailure("no consistent 1-insertion".into()))?;
            symbols.insert(insert_at, 1);
        }
        let candidate = Word::new(2, symbols)?;
        if self.label(&candidate)? != label {
            return Err(CodeError::DecodeFailure(
                "syndrome mismatch after insertion".into(),
            ));
        }
        Ok(candidate)
    }

    fn describe(&self) -> String {
        format!("vt(m={})", self.m)
    }
}
