//! Certified Stirling approximation and two-sided factorial bounds.
//!
//! `a_n` decreases strictly to `sqrt(2 pi)` and `b_n - 1/(4n)` increases
//! strictly to `ln sqrt(2 pi)`. Together they give, for every `n >= 1`,
//!
//! ```text
//! sqrt(2 pi n) (n/e)^n  <  n!  <  sqrt(2 pi n) (n/e)^n e^(1/(4n))
//! ```
//!
//! The upper factor `e^(1/(4n))` is the one the telescoping argument yields;
//! no sharper constant is claimed.

use num_bigint::BigInt;
use serde::Serialize;

use crate::decimal;
use crate::enclosure::{self, Dyadic, Interval, Precision, Rounding};
use crate::error::{Error, Result};
use crate::exactcore::{factorial, ExactRational};
use crate::sequences::EXACT_FACTORIAL_THRESHOLD;

/// Highest precision tried by [`digit_count`] before giving up on the bounds.
pub const DIGIT_PRECISION_CEILING: u32 = 1024;

/// Largest `n` for which [`digit_count`] may fall back to the exact factorial
/// when the bound band straddles a power of ten.
pub const DIGIT_EXACT_FALLBACK: u64 = 100_000;

/// Below this `n` digits are always counted from the exact factorial.
const DIGIT_EXACT_SMALL: u64 = 25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorialBounds {
    pub n: u64,
    /// `sqrt(2 pi n) (n/e)^n`
    pub approx: Interval,
    pub lower: Dyadic,
    pub upper: Dyadic,
    /// `e^(1/(4n))`
    pub correction: Interval,
}

fn require_positive(op: &'static str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(op, "n must be at least 1"));
    }
    Ok(())
}

fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `sqrt(2 pi)`, the limit of `a_n`.
pub fn sqrt_two_pi(p: Precision) -> Interval {
    let wp = p.with_extra(Precision::GUARD_BITS);
    enclosure::constant_pi(wp).mul_pow2(1).sqrt(wp).expect("pi > 0").round(p)
}

/// `sqrt(pi)`, the limit of the central-binomial sequence.
pub fn sqrt_pi(p: Precision) -> Interval {
    let wp = p.with_extra(Precision::GUARD_BITS);
    enclosure::constant_pi(wp).sqrt(wp).expect("pi > 0").round(p)
}

/// `pi / 2`, the Wallis limit.
pub fn half_pi(p: Precision) -> Interval {
    enclosure::constant_pi(p).mul_pow2(-1)
}

/// `sqrt(2 pi n) (n/e)^n`, evaluated as `exp(ln(2 pi n)/2 + n ln n - n)`.
pub fn stirling_approx(n: u64, p: Precision) -> Result<Interval> {
    require_positive("stirling_approx", n)?;
    // absolute accuracy of the exponent is relative accuracy of the result
    let nb = bit_length(n);
    let wp = p.with_extra(Precision::GUARD_BITS + nb + bit_length(nb as u64) + 1);
    let n_iv = Interval::from_int(n as i64);
    let ln_n = enclosure::ln(&n_iv, wp)?;
    let two_pi_n = enclosure::constant_pi(wp).mul(&n_iv, wp).mul_pow2(1);
    let half_log = enclosure::ln(&two_pi_n, wp)?.mul_pow2(-1);
    let exponent = half_log.add(&n_iv.mul(&ln_n, wp), wp).sub(&n_iv, wp);
    Ok(enclosure::exp(&exponent, wp).round(p))
}

/// `e^(1/(4n))`.
pub fn correction_factor(n: u64, p: Precision) -> Result<Interval> {
    require_positive("correction_factor", n)?;
    let x = Interval::from_rational(&ExactRational::recip_of(4 * n), p.with_extra(8));
    Ok(enclosure::exp(&x, p))
}

/// Certified `lower < n! < upper`.
pub fn factorial_bounds(n: u64, p: Precision) -> Result<FactorialBounds> {
    require_positive("factorial_bounds", n)?;
    let wp = p.with_extra(4);
    let approx = stirling_approx(n, wp)?;
    let correction = correction_factor(n, wp)?;
    let upper = approx.mul(&correction, wp).hi().round(p.result_bits(), Rounding::Up);
    let lower = approx.lo().round(p.result_bits(), Rounding::Down);
    Ok(FactorialBounds {
        n,
        approx: approx.round(p),
        lower,
        upper,
        correction: correction.round(p),
    })
}

impl FactorialBounds {
    /// Enclosure of `upper / lower`.
    pub fn band(&self, p: Precision) -> Interval {
        Interval::point(self.upper.clone())
            .div(&Interval::point(self.lower.clone()), p)
            .expect("lower bound is positive")
    }
}

fn pow10(d: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), d as usize)
}

/// `floor(log10 x)` for a dyadic `x >= 1`.
fn floor_log10(x: &Dyadic) -> u64 {
    decimal::floor_log10(x) as u64
}

fn exact_digit_count(n: u64) -> u64 {
    factorial(n).to_string().len() as u64
}

/// Number of decimal digits of `n!`.
///
/// Taken from the certified bounds when both ends share a decimal length.
/// Where the `e^(1/(4n))` band straddles a power of ten, no precision can
/// settle it; the exact factorial answers for `n <= DIGIT_EXACT_FALLBACK`
/// and larger `n` report [`Error::Undecided`].
pub fn digit_count(n: u64) -> Result<u64> {
    require_positive("digit_count", n)?;
    if n <= DIGIT_EXACT_SMALL {
        return Ok(exact_digit_count(n));
    }
    let mut bits = 64;
    while bits <= DIGIT_PRECISION_CEILING {
        let b = factorial_bounds(n, Precision::new(bits)?)?;
        let d = floor_log10(&b.lower);
        if b.upper.cmp_rational(&ExactRational::from_integer(pow10(d + 1))).is_le() {
            return Ok(d + 1);
        }
        // a power of ten strictly inside the proven band cannot be excluded
        let power = ExactRational::from_integer(pow10(d + 1));
        let inner_hi = b.approx.hi().clone();
        let inner_top = b.approx.mul(&b.correction, Precision::new(bits)?).lo().clone();
        if inner_hi.cmp_rational(&power).is_lt() && inner_top.cmp_rational(&power).is_gt() {
            break;
        }
        bits *= 2;
    }
    if n <= DIGIT_EXACT_FALLBACK {
        return Ok(exact_digit_count(n));
    }
    Err(Error::Undecided {
        what: format!("digit count of {n}!"),
        bits: DIGIT_PRECISION_CEILING.min(bits),
    })
}

/// `n! / stirling_approx(n) - 1`.
pub fn relative_error(n: u64, p: Precision) -> Result<Interval> {
    require_positive("relative_error", n)?;
    if n > EXACT_FACTORIAL_THRESHOLD {
        return Err(Error::domain(
            "relative_error",
            format!("n = {n} exceeds the exact factorial limit {EXACT_FACTORIAL_THRESHOLD}"),
        ));
    }
    let wp = p.with_extra(Precision::GUARD_BITS + bit_length(n));
    let approx = stirling_approx(n, wp)?;
    let exact = Interval::from_natural(&factorial(n));
    Ok(exact.div(&approx, wp)?.sub(&Interval::one(), wp).round(p))
}

/// `e^(1/(4n)) - 1`, the certified ceiling on [`relative_error`].
pub fn relative_error_bound(n: u64, p: Precision) -> Result<Interval> {
    let wp = p.with_extra(Precision::GUARD_BITS + bit_length(n));
    Ok(correction_factor(n, wp)?.sub(&Interval::one(), wp).round(p))
}
