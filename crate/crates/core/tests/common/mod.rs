//! Independent oracles and generators shared by the integration tests.
//!
//! The exponential oracle is a fixed-point Taylor sum with floor/ceil
//! rounding, written separately from the library's series so a bug in one
//! is not mirrored in the other.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stirling_core::{Dyadic, ExactRational, Interval, Precision};

pub fn rat(s: &str) -> ExactRational {
    s.parse().unwrap()
}

pub fn prec(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// `x * 2^f` rounded down and up.
fn fixed(x: &Dyadic, f: i64) -> (BigInt, BigInt) {
    let shift = x.exponent() + f;
    if shift >= 0 {
        let v = x.mantissa() << shift as u64;
        (v.clone(), v)
    } else {
        let den = BigInt::one() << (-shift) as u64;
        (x.mantissa().div_floor(&den), ceil_div(x.mantissa(), &den))
    }
}

/// Fixed-point `e^r * 2^f` bounds for `0 <= r <= 1/2` given as `(r_lo, r_hi) * 2^-f`.
fn exp_small(r_lo: &BigInt, r_hi: &BigInt, f: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << f;
    let mut lo_sum = one.clone();
    let mut term = one.clone();
    let mut i: u64 = 1;
    while !term.is_zero() {
        term = (&term * r_lo).div_floor(&(&one * i));
        lo_sum += &term;
        i += 1;
    }
    let mut hi_sum = one.clone();
    let mut term = one.clone();
    let mut i: u64 = 1;
    loop {
        term = ceil_div(&(&term * r_hi), &(&one * i));
        hi_sum += &term;
        if term <= BigInt::one() {
            // remaining terms sum to less than the last one since r <= 1/2
            hi_sum += &term;
            break;
        }
        i += 1;
    }
    (lo_sum, hi_sum)
}

/// Rational bounds `lo <= e^x <= hi` accurate to roughly `bits` bits.
pub fn exp_bounds(x: &Dyadic, bits: u32) -> (ExactRational, ExactRational) {
    if x.is_negative() {
        let (lo, hi) = exp_bounds(&x.neg(), bits);
        return (&ExactRational::one() / &hi, &ExactRational::one() / &lo);
    }
    if x.is_zero() {
        return (ExactRational::one(), ExactRational::one());
    }
    let k = (x.log2_floor().unwrap() + 2).max(0) as u64;
    let f = bits as u64 + 2 * k + 40;
    let r = x.mul_pow2(-(k as i64));
    let (r_lo, r_hi) = fixed(&r, f as i64);
    let (mut lo, mut hi) = exp_small(&r_lo, &r_hi, f);
    let one = BigInt::one() << f;
    for _ in 0..k {
        lo = (&lo * &lo).div_floor(&one);
        hi = ceil_div(&(&hi * &hi), &one);
    }
    let den = one;
    (
        ExactRational::new(lo, den.clone()).unwrap(),
        ExactRational::new(hi, den).unwrap(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Ok,
    Violation,
    Inconclusive,
}

/// Whether `e^y <= x` (when `below`) or `e^y >= x`, by the oracle.
pub fn exp_side(y: &Dyadic, x: &ExactRational, below: bool, bits: u32) -> Check {
    let (lo, hi) = exp_bounds(y, bits);
    if below {
        if &hi <= x {
            Check::Ok
        } else if &lo > x {
            Check::Violation
        } else {
            Check::Inconclusive
        }
    } else if &lo >= x {
        Check::Ok
    } else if &hi < x {
        Check::Violation
    } else {
        Check::Inconclusive
    }
}

pub fn worst(a: Check, b: Check) -> Check {
    match (a, b) {
        (Check::Violation, _) | (_, Check::Violation) => Check::Violation,
        (Check::Inconclusive, _) | (_, Check::Inconclusive) => Check::Inconclusive,
        _ => Check::Ok,
    }
}

/// Nonzero dyadic with a random mantissa of up to `max_bits` bits.
pub fn random_dyadic(rng: &mut ChaCha8Rng, max_bits: u32, exp_range: (i64, i64)) -> Dyadic {
    let bits = rng.gen_range(1..=max_bits);
    let mut m = BigInt::zero();
    for _ in 0..bits.div_ceil(32) {
        m = (m << 32) + rng.gen::<u32>();
    }
    m >>= (bits.div_ceil(32) * 32 - bits) as u64;
    m |= BigInt::one() << (bits - 1) as u64;
    if rng.gen_bool(0.5) {
        m = -m;
    }
    let e = rng.gen_range(exp_range.0..=exp_range.1);
    Dyadic::new(m, e - bits as i64)
}

/// Interval around a random point; a quarter are points.
pub fn random_interval(rng: &mut ChaCha8Rng, exp_range: (i64, i64)) -> Interval {
    let a = random_dyadic(rng, 80, exp_range);
    if rng.gen_bool(0.25) {
        return Interval::point(a);
    }
    let scale = a.log2_floor().unwrap() - rng.gen_range(1..=60);
    let w = random_dyadic(rng, 40, (scale, scale)).abs();
    Interval::new(a.clone(), a.add(&w)).unwrap()
}

pub fn random_positive(rng: &mut ChaCha8Rng, exp_range: (i64, i64)) -> Interval {
    loop {
        let iv = random_interval(rng, exp_range);
        if iv.lo().is_positive() {
            return iv;
        }
        let flipped = iv.neg();
        if flipped.lo().is_positive() {
            return flipped;
        }
    }
}

/// Endpoints plus two interior dyadics of `iv`.
pub fn sample_dyadics(rng: &mut ChaCha8Rng, iv: &Interval) -> Vec<Dyadic> {
    let width = iv.width();
    let mut out = vec![iv.lo().clone(), iv.hi().clone()];
    for _ in 0..2 {
        let t = Dyadic::new(rng.gen_range(0..=1i64 << 20).into(), -20);
        out.push(iv.lo().add(&width.mul(&t)));
    }
    out
}

/// [`sample_dyadics`] as exact rationals.
pub fn sample_points(rng: &mut ChaCha8Rng, iv: &Interval) -> Vec<ExactRational> {
    sample_dyadics(rng, iv).iter().map(Dyadic::to_rational).collect()
}

pub const PRECISIONS: [u32; 9] = [8, 16, 24, 32, 53, 64, 100, 128, 200];

pub fn random_precision(rng: &mut ChaCha8Rng) -> Precision {
    prec(PRECISIONS[rng.gen_range(0..PRECISIONS.len())])
}

pub fn rational_pow(x: &ExactRational, e: i64) -> ExactRational {
    let mut out = ExactRational::one();
    for _ in 0..e.unsigned_abs() {
        out = &out * x;
    }
    if e < 0 {
        &ExactRational::one() / &out
    } else {
        out
    }
}
