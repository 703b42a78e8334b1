//! Certified computation of the objects behind Stirling's formula.
//!
//! Everything real-valued is carried as an [`Interval`] with dyadic
//! endpoints; integers and rationals are exact.

pub mod decimal;
pub mod enclosure;
pub mod error;
pub mod exactcore;
pub mod sequences;
pub mod stirling;
pub mod verifier;
pub mod wallis;

pub use enclosure::{certainly_lt, Dyadic, Interval, Precision, Rounding, TriState};
pub use error::{Error, Result};
pub use exactcore::{ExactRational, Natural};
