//! SL(2,N)-saturated Farey fractions.
//!
//! For an order `Q ≥ 3` the saturated set `SF_Q` consists of the reduced
//! fractions `d/b ∈ (0, 1]` that are the image `d/b` of some matrix
//! `(a b; c d) ∈ SL(2,Z)` with positive entries, `a ≥ max(b, c)`, `b, c ≥ d`
//! and trace at most `Q`. Equivalently `b + d + d̄ ≤ Q`, where `d̄` is the
//! inverse of `d` modulo `b`.
//!
//! The crate builds these sets three independent ways (Farey-walk filter,
//! mediant insertion, image of the trace-bounded monoid), checks the
//! structural identities they satisfy, and compares exact counts and gap
//! statistics against the limiting densities and gap-distribution constants.
//!
//! Module map:
//!
//! * [`farey`]: reduced fractions, modular inverses, `h`-values, mediants and
//!   the Farey successor recurrence.
//! * [`saturated`]: the saturated sequences and the mediant-insertion tree.
//! * [`monoid`]: the matrix monoid, its trace slices and continued-fraction
//!   factorization.
//! * [`distribution`]: counting functions against their main terms.
//! * [`gap`]: the triangle map, run enumeration, region areas and the
//!   limiting gap distribution.
//! * [`verify`]: exhaustive property sweeps shared by the CLI and tests.

pub mod distribution;
pub mod error;
pub mod exec;
pub mod export;
pub mod farey;
pub mod gap;
pub mod monoid;
pub mod quadrature;
pub mod saturated;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use farey::{h_value, mediant, mod_inverse, next_farey, is_saturated, Fraction, HValue};
pub use monoid::{CfWord, MonoidMatrix};
pub use saturated::{InsertionRecord, SaturatedSequence};
