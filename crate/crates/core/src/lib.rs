//! Codes over `Σ_q` that correct two bursts of exactly `b` deletions, plus the
//! companion q-ary two-deletion codes, their syndrome machinery, size bounds,
//! and an exhaustive desk-scale verifier.
//!
//! The crate is organized around the pipeline the constructions share:
//!
//! * [`seq`] — words, runs, array representations, the u/v symbol split and
//!   d-regularity;
//! * [`channel`] — burst-deletion and erasure channels, deletion balls,
//!   confusability;
//! * [`sketch`] — pluggable labeling functions ("sketches") that pin down a
//!   word inside a deletion ball: constructive VT / Tenengolts / row-wise
//!   backends and an exact graph-coloring backend;
//! * [`erasure`] — the code over `[0, N-1]^n` correcting two length-2 erasure
//!   bursts, used to patch segment-label vectors;
//! * [`localize`] — narrowing two deletions to a run pair or a short window;
//! * [`c1`] / [`c2`] — the sieve codes for two b-burst-deletions and for two
//!   plain deletions (q > 2), with full decoders;
//! * [`bounds`] — size and redundancy bounds with exact arithmetic where the
//!   comparison is discrete;
//! * [`verify`] — exhaustive code/decoder verification, greedy baselines, and
//!   mutation sensitivity checks.

pub mod bounds;
pub mod c1;
pub mod c2;
pub mod channel;
pub mod erasure;
pub mod error;
pub mod localize;
pub mod ratio;
pub mod seq;
pub mod sketch;
pub mod verify;

pub use error::{CodeError, Result};
pub use ratio::Ratio;
pub use seq::{ArrayRep, Interval, RunProfile, Word};
