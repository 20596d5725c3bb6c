//! Size and redundancy bounds for two-burst-deletion codes.
//!
//! The lower bound is exact big-integer arithmetic (it feeds a discrete
//! comparison against greedy code sizes); the upper bound and the entropy
//! inequalities are floating point with explicit hypothesis flags, reported
//! even when the hypotheses fail at desk scale.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{param_err, Result};

/// `binom(n, 2)^2` as a big integer.
fn choose2_squared(n: usize) -> BigUint {
    let c2 = BigUint::from(n) * BigUint::from(n - 1) / BigUint::from(2u32);
    &c2 * &c2
}

/// Exact `floor(q^(n-2b) / binom(n,2)^2)`, the guaranteed code size.
pub fn lower_bound(q: u32, n: usize, b: usize) -> Result<BigUint> {
    if n <= 2 * b {
        return param_err("lower bound needs n > 2b");
    }
    if q < 2 {
        return param_err("alphabet size must be >= 2");
    }
    let numerator = BigUint::from(q).pow((n - 2 * b) as u32);
    Ok(numerator / choose2_squared(n))
}

/// The q-ary entropy `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`
/// with the endpoint convention `0·log 0 = 0`.
pub fn entropy_q(x: f64, q: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return param_err(format!("entropy argument {x} outside [0, 1]"));
    }
    let lq = (q as f64).ln();
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.ln() / lq };
    Ok(x * ((q - 1) as f64).ln() / lq + term(x) + term(1.0 - x))
}

/// `f(q) = min{1/q, (q-1)/2q, ((q-1)²/(q²-3q+6))·(1/q - (q-1)·ln q / 2q³)}`.
pub fn f_of_q(q: u32) -> f64 {
    let qf = q as f64;
    let t1 = 1.0 / qf;
    let t2 = (qf - 1.0) / (2.0 * qf);
    let t3 = (qf - 1.0).powi(2) / (qf * qf - 3.0 * qf + 6.0)
        * (1.0 / qf - (qf - 1.0) * qf.ln() / (2.0 * qf.powi(3)));
    t1.min(t2).min(t3)
}

/// Hypotheses of the counting upper bound at `(q, n, b)`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct UpperBoundHypotheses {
    /// `n >= 30`
    pub n_at_least_30: bool,
    /// `log2(n)/n < (log2 q / 12)·f(q)²`
    pub epsilon_condition: bool,
    /// `(1 - (q/(q-1))·sqrt(12 log2 n / (n log2 q)))² (1 - b/n)² >= 2/3`
    pub concentration_condition: bool,
}

impl UpperBoundHypotheses {
    pub fn all_hold(&self) -> bool {
        self.n_at_least_30 && self.epsilon_condition && self.concentration_condition
    }
}

/// The counting upper bound
/// `(3b²/(q^(2b-2)(q-1)²) + 1.121^(3b)/n) · q^n/n²`, with its hypotheses
/// evaluated by direct substitution. Returned in log2 to stay finite.
pub fn upper_bound_log2(q: u32, n: usize, b: usize) -> Result<(f64, UpperBoundHypotheses)> {
    if n <= 2 * b {
        return param_err("upper bound needs n > 2b");
    }
    let qf = q as f64;
    let nf = n as f64;
    let bf = b as f64;
    let eps = (12.0 * nf.log2() / (nf * qf.log2())).sqrt();
    let hyp = UpperBoundHypotheses {
        n_at_least_30: n >= 30,
        epsilon_condition: nf.log2() / nf < qf.log2() / 12.0 * f_of_q(q).powi(2),
        concentration_condition: {
            let factor = (1.0 - qf / (qf - 1.0) * eps).powi(2) * (1.0 - bf / nf).powi(2);
            factor >= 2.0 / 3.0
        },
    };
    let residual = 3.0 * bf * bf / (qf.powf(2.0 * bf - 2.0) * (qf - 1.0).powi(2))
        + 1.121f64.powf(3.0 * bf) / nf;
    let log_value = residual.log2() + nf * qf.log2() - 2.0 * nf.log2();
    Ok((log_value, hyp))
}

/// Redundancy range from the two bounds:
/// `2 log n + (2b-2) log q + 2 log(q-1) - 2 log b - 2 <= ρ <= 4 log n + 2b log q`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct RedundancyRange {
    pub lower_bits: f64,
    pub upper_bits: f64,
}

pub fn redundancy_range(q: u32, n: usize, b: usize) -> RedundancyRange {
    let nf = n as f64;
    let qf = q as f64;
    let bf = b as f64;
    RedundancyRange {
        lower_bits: 2.0 * nf.log2() + (2.0 * bf - 2.0) * qf.log2() + 2.0 * (qf - 1.0).log2()
            - 2.0 * bf.log2()
            - 2.0,
        upper_bits: 4.0 * nf.log2() + 2.0 * bf * qf.log2(),
    }
}

/// Everything the `bounds` CLI reports for one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub q: u32,
    pub n: usize,
    pub b: usize,
    pub lower_bound_size: String,
    pub lower_bound_vacuous: bool,
    pub upper_bound_log2_size: f64,
    pub hypotheses: UpperBoundHypotheses,
    pub redundancy_range: RedundancyRange,
}

pub fn bound_report(q: u32, n: usize, b: usize) -> Result<BoundReport> {
    let lower = lower_bound(q, n, b)?;
    let (upper_log2, hypotheses) = upper_bound_log2(q, n, b)?;
    Ok(BoundReport {
        q,
        n,
        b,
        lower_bound_size: lower.to_string(),
        lower_bound_vacuous: lower.is_zero(),
        upper_bound_log2_size: upper_log2,
        hypotheses,
        redundancy_range: redundancy_range(q, n, b),
    })
}

/// One grid row of the entropy inequality check
/// `H_q(1 - 1/q - ε) <= 1 - ε²/4`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyGapSample {
    pub epsilon: f64,
    pub entropy: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Check the inequality on `points` evenly spaced ε values strictly inside
/// `(0, f(q))`, with the stated comparison slack.
pub fn entropy_gap_check(q: u32, points: usize, slack: f64) -> Result<Vec<EntropyGapSample>> {
    if q < 2 {
        return param_err("entropy gap needs q >= 2");
    }
    let cap = f_of_q(q);
    let mut out = Vec::with_capacity(points + 1);
    for i in 0..=points {
        let eps = cap * i as f64 / (points as f64 + 1.0);
        let entropy = entropy_q(1.0 - 1.0 / q as f64 - eps, q)?;
        let bound = 1.0 - eps * eps / 4.0;
        out.push(EntropyGapSample {
            epsilon: eps,
            entropy,
            bound,
            ok: entropy <= bound + slack,
        });
    }
    Ok(out)
}

/// The three logarithm inequalities behind the entropy gap:
/// `ln(1-x) <= -x - x²/2`, `-ln(1+x) <= -x + x²/2` on `[0, 1)`, and
/// `-ln(1-x) <= x + x²/2 + 2x³` on `[0, 1/2]`.
pub fn log_inequality_check(points: usize, slack: f64) -> Vec<(f64, bool)> {
    let mut out = Vec::with_capacity(points + 1);
    for i in 0..=points {
        let x = 0.999 * i as f64 / points as f64;
        let a = (1.0 - x).ln() <= -x - x * x / 2.0 + slack;
        let b = -(1.0 + x).ln() <= -x + x * x / 2.0 + slack;
        let c = if x <= 0.5 {
            -(1.0 - x).ln() <= x + x * x / 2.0 + 2.0 * x * x * x + slack
        } else {
            true
        };
        out.push((x, a && b && c));
    }
    out
}

/// `log2` of a big integer as f64 (for redundancy arithmetic); zero maps to
/// negative infinity.
pub fn log2_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    if v.is_one() {
        return 0.0;
    }
    let bits = v.bits();
    if let Some(f) = v.to_f64() {
        f.log2()
    } else {
        bits as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_examples() {
        // floor(2^6 / 2025) = 0: vacuous at this scale
        assert_eq!(lower_bound(2, 10, 2).unwrap(), BigUint::zero());
        // floor(2^26 / binom(30,2)^2) = floor(67108864 / 189225)
        assert_eq!(
            lower_bound(2, 30, 2).unwrap(),
            BigUint::from(67108864u64 / 189225)
        );
        assert!(lower_bound(2, 4, 2).is_err());
    }

    #[test]
    fn lower_bound_eventually_monotone() {
        let mut prev = BigUint::zero();
        for n in 40..80 {
            let v = lower_bound(2, n, 2).unwrap();
            assert!(v >= prev, "dip at n={n}");
            prev = v;
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy_q(0.5, 2).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(entropy_q(0.0, 3).unwrap(), 0.0);
        for q in [2u32, 3, 4, 5] {
            let peak = entropy_q(1.0 - 1.0 / q as f64, q).unwrap();
            assert!((peak - 1.0).abs() < 1e-12, "H_q at 1-1/q must be 1");
        }
        assert!(entropy_q(1.2, 2).is_err());
    }

    #[test]
    fn entropy_symmetry_binary() {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let a = entropy_q(x, 2).unwrap();
            let b = entropy_q(1.0 - x, 2).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_bound_hypotheses_at_examples() {
        let (_, hyp) = upper_bound_log2(2, 100, 2).unwrap();
        assert!(hyp.n_at_least_30);
        // log2(100)/100 = 0.0664; (1/12)·f(2)^2 with f(2) = min(0.5, 0.25, ...)
        assert!(!hyp.epsilon_condition);
        // at huge n the epsilon condition holds
        let (_, hyp) = upper_bound_log2(2, 1 << 20, 2).unwrap();
        assert!(hyp.epsilon_condition && hyp.concentration_condition);
    }

    #[test]
    fn f_of_q_values() {
        let f2 = f_of_q(2);
        assert!(f2 > 0.0 && f2 <= 0.25);
        // third term is binding for q = 2: (1/4)·(1/2 - ln2/16)
        let t3 = 0.25 * (0.5 - std::f64::consts::LN_2 / 16.0);
        assert!((f2 - t3).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_scales_down_in_n() {
        // (upper bound)/q^n shrinks as n grows
        let (a, _) = upper_bound_log2(2, 64, 2).unwrap();
        let (b, _) = upper_bound_log2(2, 128, 2).unwrap();
        assert!(a - 64.0 > b - 128.0);
    }

    #[test]
    fn entropy_gap_holds_on_grids() {
        for q in [2u32, 3, 4, 5] {
            let samples = entropy_gap_check(q, 1000, 1e-12).unwrap();
            assert!(samples.len() > 1000);
            assert!(samples.iter().all(|s| s.ok), "q={q}");
            // ε = 0 end: equality H_q(1-1/q) = 1
            assert!((samples[0].entropy - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_inequalities_hold() {
        assert!(log_inequality_check(1000, 1e-12).iter().all(|&(_, ok)| ok));
    }
}
