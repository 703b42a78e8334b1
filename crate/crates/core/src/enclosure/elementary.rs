//! Certified elementary functions on intervals.
//!
//! The logarithm is driven by a single engine, the odd power series
//! `atanh(k) = sum k^(2i+1) / (2i+1)`, which equals `(1/2) ln((1+k)/(1-k))`.
//! Truncation error is closed with the geometric tail `|k|^(2m+3) / (1-k^2)`.
//! The exponential uses its Taylor series with a factorial tail bound after
//! halving the argument into `[-1, 1]`.

use std::cell::RefCell;
use std::collections::HashMap;

use super::dyadic::{Dyadic, Rounding};
use super::interval::{Interval, Precision};
use crate::error::{Error, Result};
use crate::exactcore::ExactRational;

/// Extra bits below the target at which series stop.
const SERIES_MARGIN: i64 = 4;

fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `sum_{i>=0} k^(2i+1)/(2i+1)` for `|k| < 1`, working at `bits`.
pub(crate) fn atanh_series(k: &ExactRational, bits: u32) -> Interval {
    debug_assert!(k.abs() < ExactRational::one());
    if k.is_zero() {
        return Interval::zero();
    }
    let k_sq = k * k;
    let step = Interval::from_rational_bits(&k_sq, bits);
    let mut power = Interval::from_rational_bits(k, bits);
    let mut sum = Interval::zero();

    // 1 - k^2, rounded down, bounds the geometric denominator
    let one_minus = Dyadic::from_rational(&(ExactRational::one() - k_sq), bits, Rounding::Down);
    let k_mag = Dyadic::from_rational(&k.abs(), bits, Rounding::Down);
    let target = k_mag.mul_pow2(-(bits as i64) - SERIES_MARGIN);

    let mut i: u64 = 0;
    let tail = loop {
        sum = sum.add_bits(&power.div_u64(2 * i + 1, bits), bits);
        power = power.mul_bits(&step, bits);
        let tail = power.mag().div(&one_minus, bits, Rounding::Up);
        if tail < target {
            break tail;
        }
        i += 1;
    };
    // all terms share the sign of k
    if k.is_positive() {
        Interval::from_ordered(sum.lo().clone(), sum.hi().add(&tail))
    } else {
        Interval::from_ordered(sum.lo().sub(&tail), sum.hi().clone())
    }
}

/// Encloses `(1/2) ln((1+k)/(1-k))` for `0 < k < 1`.
pub fn atanh_halflog(k: &ExactRational, p: Precision) -> Result<Interval> {
    if !k.is_positive() || k >= &ExactRational::one() {
        return Err(Error::domain("atanh_halflog", format!("k = {k} outside (0, 1)")));
    }
    Ok(atanh_series(k, p.working_bits()).round(p))
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
}

/// `ln 2 = 2 atanh(1/3)`.
pub(crate) fn ln2_bits(bits: u32) -> Interval {
    LN2_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(bits)
            .or_insert_with(|| atanh_series(&ExactRational::recip_of(3), bits).mul_pow2(1))
            .clone()
    })
}

/// Logarithm of a positive dyadic.
///
/// The argument is scaled by `2^-s` into `[3/4, 3/2]`, which gives
/// `|k| = |(y-1)/(y+1)| <= 1/5`, and `s ln 2` is added back.
pub(crate) fn ln_point(y: &Dyadic, bits: u32) -> Interval {
    debug_assert!(y.is_positive());
    let top = y.log2_floor().expect("positive");
    // y 2^-top lies in [1, 2)
    let three_halves = Dyadic::new(3.into(), -1);
    let s = if y.mul_pow2(-top) >= three_halves { top + 1 } else { top };
    let wp = bits + bit_length(s.unsigned_abs()) + 2;
    let scaled = y.mul_pow2(-s).to_rational();
    let one = ExactRational::one();
    let k = &(&scaled - &one) / &(&scaled + &one);
    let mut result = atanh_series(&k, wp).mul_pow2(1);
    if s != 0 {
        let shift = Interval::from_int(s);
        result = result.add_bits(&ln2_bits(wp).mul_bits(&shift, wp), wp);
    }
    result.round_bits(bits)
}

pub(crate) fn ln_bits(x: &Interval, bits: u32) -> Result<Interval> {
    if !x.lo().is_positive() {
        return Err(Error::domain("ln", "operand not strictly positive"));
    }
    let lo = ln_point(x.lo(), bits);
    if x.is_point() {
        return Ok(lo);
    }
    let rel = x.width().div(x.lo(), bits, Rounding::Up);
    let hi = if rel < Dyadic::pow2(-8) {
        // ln(hi) - ln(lo) <= (hi - lo) / lo
        lo.hi().add(&rel).round(bits, Rounding::Up)
    } else {
        ln_point(x.hi(), bits).hi().clone()
    };
    Ok(Interval::from_ordered(lo.lo().clone(), hi))
}

/// Natural logarithm of a positive interval.
pub fn ln(x: &Interval, p: Precision) -> Result<Interval> {
    Ok(ln_bits(x, p.working_bits())?.round(p))
}

/// Exponential of a dyadic point.
pub(crate) fn exp_point(x: &Dyadic, bits: u32) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let top = x.log2_floor().expect("nonzero");
    let halvings = if top >= 0 { (top + 1) as u32 } else { 0 };
    // each squaring doubles the relative error
    let wp = bits + halvings + 8;
    let r = x.mul_pow2(-(halvings as i64));
    let r_iv = Interval::point(r.clone());
    let r_mag = r.abs();
    let target = Dyadic::pow2(-(wp as i64) - SERIES_MARGIN);

    let mut sum = Interval::one();
    let mut term = Interval::one();
    let mut i: u64 = 1;
    let tail = loop {
        term = term.mul_bits(&r_iv, wp).div_u64(i, wp);
        sum = sum.add_bits(&term, wp);
        // |remainder| <= |r|^(i+1)/(i+1)! * 1/(1 - |r|/(i+2)) <= 2 |term| |r| / (i+1)
        let tail = term
            .mag()
            .mul(&r_mag)
            .div(&Dyadic::from_int(i as i64 + 1), wp, Rounding::Up)
            .mul_pow2(1);
        if tail < target {
            break tail;
        }
        i += 1;
    };
    let mut value = Interval::from_ordered(sum.lo().sub(&tail), sum.hi().add(&tail)).round_bits(wp);
    for _ in 0..halvings {
        value = value.mul_bits(&value, wp);
    }
    value.round_bits(bits)
}

pub(crate) fn exp_bits(x: &Interval, bits: u32) -> Interval {
    let lo = exp_point(x.lo(), bits);
    if x.is_point() {
        return lo;
    }
    let w = x.width();
    let hi = if w < Dyadic::pow2(-8) {
        // exp(hi) = exp(lo) exp(w) <= exp(lo) (1 + 2w) for w <= 1
        let factor = Dyadic::one().add(&w.mul_pow2(1));
        lo.hi().mul(&factor).round(bits, Rounding::Up)
    } else {
        exp_point(x.hi(), bits).hi().clone()
    };
    Interval::from_ordered(lo.lo().clone(), hi)
}

/// Exponential of an interval.
pub fn exp(x: &Interval, p: Precision) -> Interval {
    exp_bits(x, p.working_bits()).round(p)
}

/// Encloses `x^r = exp(r ln x)` for a positive interval `x`.
pub fn pow_rational(x: &Interval, r: &ExactRational, p: Precision) -> Result<Interval> {
    if !x.lo().is_positive() {
        return Err(Error::domain("pow_rational", "base not strictly positive"));
    }
    if r.is_zero() {
        return Ok(Interval::one());
    }
    // |r ln x| can be large; its absolute error becomes the relative error
    let log_mag = x.lo().log2_floor().unwrap().abs().max(x.hi().log2_floor().unwrap().abs()) + 1;
    let r_mag = r.numer().bits() as i64 - r.denom().bits() as i64 + 1;
    let extra = (bit_length(log_mag as u64) as i64 + r_mag).max(0) as u32;
    let wp = p.working_bits() + extra;
    let log = ln_bits(x, wp)?;
    let scaled = log.mul_bits(&Interval::from_rational_bits(r, wp), wp);
    Ok(exp_bits(&scaled, wp).round(p))
}

/// Euler's number.
pub fn constant_e(p: Precision) -> Interval {
    exp_point(&Dyadic::one(), p.working_bits()).round(p)
}

/// `atan(1/x)` by its alternating series; the first omitted term bounds
/// the truncation error.
fn atan_recip(x: u64, bits: u32) -> Interval {
    let x_sq = x * x;
    let mut power = Interval::from_rational_bits(&ExactRational::recip_of(x), bits);
    let mut sum = Interval::zero();
    let target = Dyadic::pow2(-(bits as i64) - SERIES_MARGIN);
    let mut i: u64 = 0;
    loop {
        let term = power.div_u64(2 * i + 1, bits);
        sum = if i % 2 == 0 {
            sum.add_bits(&term, bits)
        } else {
            sum.sub_bits(&term, bits)
        };
        power = power.div_u64(x_sq, bits);
        let next = power.div_u64(2 * i + 3, bits).mag();
        if next < target {
            return Interval::from_ordered(sum.lo().sub(&next), sum.hi().add(&next));
        }
        i += 1;
    }
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn constant_pi(p: Precision) -> Interval {
    let wp = p.working_bits() + 4;
    let a = atan_recip(5, wp).mul_pow2(4);
    let b = atan_recip(239, wp).mul_pow2(2);
    a.sub_bits(&b, wp).round(p)
}
