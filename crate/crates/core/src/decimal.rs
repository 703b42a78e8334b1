//! Decimal rendering of dyadic endpoints with directed rounding.
//!
//! Lower endpoints are rounded down and upper endpoints up, so a printed
//! interval always contains the dyadic one it came from.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::enclosure::{Dyadic, Interval, Precision, Rounding};
use crate::exactcore::ExactRational;

/// Plain notation is used when the leading digit's exponent lies here.
const PLAIN_EXPONENTS: std::ops::RangeInclusive<i64> = -5..=20;

/// Guard digits printed past the first separating digit.
pub const GUARD_DIGITS: u32 = 2;

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

/// `10^k` as an exact rational, for any sign of `k`.
fn pow10_rational(k: i64) -> ExactRational {
    let p = pow10(k.unsigned_abs());
    if k >= 0 {
        ExactRational::from_integer(p)
    } else {
        ExactRational::new(1, p).expect("nonzero")
    }
}

/// `floor(log10 |x|)` for nonzero `x`, decided exactly.
pub fn floor_log10(x: &Dyadic) -> i64 {
    let x = x.abs();
    let l2 = x.log2_floor().expect("nonzero");
    let mut d = (l2 as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while x.cmp_rational(&pow10_rational(d)).is_lt() {
        d -= 1;
    }
    while x.cmp_rational(&pow10_rational(d + 1)).is_ge() {
        d += 1;
    }
    d
}

/// Significant digits that carry information at precision `p`.
pub fn max_digits(p: Precision) -> u32 {
    (p.result_bits() as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 3
}

/// `x * 10^shift` rounded to an integer in direction `dir`.
fn scaled_integer(x: &Dyadic, shift: i64, dir: Rounding) -> (BigInt, bool) {
    let q = &x.to_rational() * &pow10_rational(shift);
    let floor = q.floor();
    let exact = ExactRational::from_integer(floor.clone()) == q;
    match dir {
        Rounding::Down => (floor, exact),
        Rounding::Up if exact => (floor, true),
        Rounding::Up => (floor + 1, false),
    }
}

/// Writes `n * 10^scale`.
fn format_scaled(n: &BigInt, scale: i64) -> String {
    if n.is_zero() {
        return "0".to_string();
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let digits = n.abs().to_string();
    let lead = scale + digits.len() as i64 - 1;
    if PLAIN_EXPONENTS.contains(&lead) {
        if scale >= 0 {
            format!("{sign}{digits}{}", "0".repeat(scale as usize))
        } else {
            let frac_len = (-scale) as usize;
            if digits.len() > frac_len {
                let (int, frac) = digits.split_at(digits.len() - frac_len);
                format!("{sign}{int}.{frac}")
            } else {
                format!("{sign}0.{}{digits}", "0".repeat(frac_len - digits.len()))
            }
        }
    } else {
        let (first, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{first}e{lead}")
        } else {
            format!("{sign}{first}.{rest}e{lead}")
        }
    }
}

/// `x` with `digits` significant digits, rounded in direction `dir`.
pub fn render(x: &Dyadic, digits: u32, dir: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1) as i64;
    let shift = digits - 1 - floor_log10(x);
    let (n, _) = scaled_integer(x, shift, dir);
    format_scaled(&n, -shift)
}

/// Fewest significant digits that render `x` exactly, capped at `cap`.
fn exact_digits(x: &Dyadic, cap: u32) -> u32 {
    if x.is_zero() {
        return 1;
    }
    let e = floor_log10(x);
    (1..=cap)
        .find(|&s| scaled_integer(x, s as i64 - 1 - e, Rounding::Down).1)
        .unwrap_or(cap)
}

/// Significant digits needed to tell `lo` from `hi`, plus guard digits.
pub fn separating_digits(iv: &Interval, cap: u32) -> u32 {
    if iv.is_point() {
        return exact_digits(iv.lo(), cap);
    }
    let top = if iv.lo().abs() > iv.hi().abs() { iv.lo() } else { iv.hi() };
    let e = floor_log10(top);
    let sep = (1..=cap)
        .find(|&s| {
            let shift = s as i64 - 1 - e;
            scaled_integer(iv.lo(), shift, Rounding::Down).0 != scaled_integer(iv.hi(), shift, Rounding::Down).0
        })
        .unwrap_or(cap);
    (sep + GUARD_DIGITS).min(cap)
}

/// Outward-rounded decimal endpoints of `iv`.
pub fn render_interval(iv: &Interval, p: Precision) -> (String, String) {
    let digits = separating_digits(iv, max_digits(p));
    (
        render(iv.lo(), digits, Rounding::Down),
        render(iv.hi(), digits, Rounding::Up),
    )
}
