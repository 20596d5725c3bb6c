use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{CodeError, Result};

/// A positive rational, used for the regularity parameter `d`.
///
/// Window thresholds of the form "smallest integer `L` with `L >= t·log2(m)`"
/// are computed exactly over big integers, so parameter points that land on
/// integer thresholds (for example `d = 2`, `m = 16`) never depend on
/// floating-point rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(CodeError::InvalidParameter(format!(
                "ratio must be positive, got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_int(num: u32) -> Self {
        Ratio {
            num: num.max(1),
            den: 1,
        }
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Scale the numerator, e.g. `d.scaled(3)` for `3d` bounds.
    pub fn scaled(&self, k: u32) -> Ratio {
        let num = self.num.checked_mul(k).expect("ratio scale overflow");
        let g = gcd(num, self.den);
        Ratio {
            num: num / g,
            den: self.den / g,
        }
    }

    /// Smallest integer `L >= self * log2(m)`, exact.
    ///
    /// `L*den >= num*log2(m)` iff `2^(L*den) >= m^num`, decided over `BigUint`.
    pub fn log2_threshold(&self, m: usize) -> usize {
        assert!(m >= 1, "threshold needs m >= 1");
        let r = BigUint::from(m).pow(self.num);
        let bits = r.bits();
        let target = if r == BigUint::one() << (bits - 1) {
            bits - 1
        } else {
            bits
        };
        (target as usize).div_ceil(self.den as usize)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    num_integer::gcd(a, b)
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = CodeError;

    /// Accepts `"2"`, `"3/2"`, and short decimals like `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CodeError::InvalidParameter(format!("cannot parse ratio `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u32 = a.trim().parse().map_err(|_| bad())?;
            let den: u32 = b.trim().parse().map_err(|_| bad())?;
            return Ratio::new(num, den);
        }
        if let Some((a, b)) = s.split_once('.') {
            if b.len() > 6 || b.chars().any(|c| !c.is_ascii_digit()) {
                return Err(bad());
            }
            let whole: u32 = a.trim().parse().map_err(|_| bad())?;
            let frac: u32 = if b.is_empty() {
                0
            } else {
                b.parse().map_err(|_| bad())?
            };
            let den = 10u32.pow(b.len() as u32);
            return Ratio::new(whole * den + frac, den);
        }
        let num: u32 = s.trim().parse().map_err(|_| bad())?;
        Ratio::new(num, 1)
    }
}

impl TryFrom<String> for Ratio {
    type Error = CodeError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Ratio> for String {
    fn from(r: Ratio) -> String {
        r.to_string()
    }
}
