//! Sketches: short labels that pin a word down inside its deletion ball.
//!
//! A sketch is a labeled hash contract. For a fixed domain and channel, the
//! label function must separate every confusable pair of domain words, and
//! `decode(y, label(x)) = x` must hold for every `y` in the ball of `x`.
//! The named roles used by the sieve codes are bound to backends satisfying
//! that contract:
//!
//! * single binary deletion — [`VtSketch`] (constructive);
//! * single q-ary deletion — [`TenengoltsSketch`] (constructive);
//! * single b-burst — [`RowwiseBurstSketch`] (constructive) or coloring;
//! * two binary/q-ary deletions and anything else — [`ColoringSketch`], an
//!   exact confusability-graph coloring oracle, composed per bit row by
//!   [`Xi1Sketch`] and per array row by [`PsiSketch`].
//!
//! Backends report their measured label-space sizes; redundancy accounting
//! downstream uses those measurements, never asymptotic claims.

mod coloring;
mod composite;
mod rowwise;
mod tenengolts;
mod vt;

pub use coloring::{ColoringSketch, DomainSpec};
pub use composite::{PsiSketch, Xi1Sketch};
pub use rowwise::RowwiseBurstSketch;
pub use tenengolts::TenengoltsSketch;
pub use vt::VtSketch;

use crate::error::{CodeError, Result};
use crate::seq::Word;

/// The sketch contract shared by every backend.
pub trait Sketch: Send + Sync {
    /// Size of the label space; labels lie in `[0, label_space())`.
    fn label_space(&self) -> u64;

    /// Label of a domain word.
    fn label(&self, x: &Word) -> Result<u64>;

    /// Recover the unique domain word consistent with `corrupted` and `label`.
    fn decode(&self, corrupted: &Word, label: u64) -> Result<Word>;

    fn describe(&self) -> String;
}

/// Selects the backend for the roles that have a constructive realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Constructive,
    Coloring,
}

impl std::str::FromStr for BackendKind {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constructive" => Ok(BackendKind::Constructive),
            "coloring" => Ok(BackendKind::Coloring),
            other => Err(CodeError::InvalidParameter(format!(
                "unknown sketch backend `{other}` (expected constructive|coloring)"
            ))),
        }
    }
}

/// Pack per-component labels into one integer, least-significant first.
pub(crate) fn pack_radix(labels: &[u64], spaces: &[u64]) -> Result<u64> {
    debug_assert_eq!(labels.len(), spaces.len());
    let mut acc: u128 = 0;
    let mut scale: u128 = 1;
    for (&l, &s) in labels.iter().zip(spaces) {
        debug_assert!(l < s);
        acc += l as u128 * scale;
        scale = scale
            .checked_mul(s as u128)
            .ok_or_else(|| CodeError::InvalidParameter("label space overflow".into()))?;
    }
    u64::try_from(acc).map_err(|_| CodeError::InvalidParameter("label space exceeds u64".into()))
}

/// Inverse of [`pack_radix`].
pub(crate) fn unpack_radix(mut value: u64, spaces: &[u64]) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(spaces.len());
    for &s in spaces {
        out.push(value % s);
        value /= s;
    }
    if value != 0 {
        return Err(CodeError::DecodeFailure("packed label out of range".into()));
    }
    Ok(out)
}

pub(crate) fn total_space(spaces: &[u64]) -> Result<u64> {
    let mut acc: u128 = 1;
    for &s in spaces {
        acc = acc
            .checked_mul(s as u128)
            .ok_or_else(|| CodeError::InvalidParameter("label space overflow".into()))?;
    }
    u64::try_from(acc).map_err(|_| CodeError::InvalidParameter("label space exceeds u64".into()))
}
