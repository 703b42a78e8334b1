//! Dyadic interval arithmetic with outward rounding.

mod dyadic;
mod elementary;
mod interval;

pub use dyadic::{Dyadic, Rounding};
pub use elementary::{atanh_halflog, constant_e, constant_pi, exp, ln, pow_rational};
pub use interval::{certainly_lt, Interval, Precision, TriState};

pub(crate) use elementary::{ln_bits, ln_point};
