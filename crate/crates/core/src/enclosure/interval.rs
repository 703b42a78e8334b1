use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};
use crate::exactcore::{ExactRational, Natural};

/// Target precision of a certified computation, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 8;
    /// Guard bits carried by intermediate steps.
    pub const GUARD_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Precision {
                bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Mantissa length used when rounding results outward. The two extra
    /// bits keep a result's width within `2^-p` relative to its magnitude.
    pub fn result_bits(self) -> u32 {
        self.0 + 2
    }

    /// Mantissa length for intermediate quantities.
    pub fn working_bits(self) -> u32 {
        self.0 + Self::GUARD_BITS
    }

    /// Same precision widened by `extra` bits.
    pub fn with_extra(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(bits: u32) -> Result<Self> {
        Precision::new(bits)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    CertainlyTrue,
    CertainlyFalse,
    Undecided,
}

impl TriState {
    pub fn is_true(self) -> bool {
        self == TriState::CertainlyTrue
    }

    pub fn is_decided(self) -> bool {
        self != TriState::Undecided
    }

    /// Conjunction over certified outcomes.
    pub fn and(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (CertainlyFalse, _) | (_, CertainlyFalse) => CertainlyFalse,
            (CertainlyTrue, CertainlyTrue) => CertainlyTrue,
            _ => Undecided,
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints, containing some real
/// quantity. Every operation rounds outward so the exact result of any
/// choice of operands from the inputs stays inside.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("interval", format!("lo {lo:?} > hi {hi:?}")));
        }
        Ok(Interval { lo, hi })
    }

    pub(crate) fn from_ordered(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "unordered endpoints {lo:?} {hi:?}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Interval::point(Dyadic::one())
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_natural(n: &Natural) -> Self {
        Interval::point(Dyadic::from_natural(n))
    }

    /// Tightest enclosure of `q` at the given precision; exact for dyadic `q`.
    pub fn from_rational(q: &ExactRational, p: Precision) -> Self {
        Interval::from_rational_bits(q, p.result_bits())
    }

    pub(crate) fn from_rational_bits(q: &ExactRational, bits: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, bits, Rounding::Down),
            hi: Dyadic::from_rational(q, bits, Rounding::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> Dyadic {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    /// Midpoint as `f64`, display only.
    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &ExactRational) -> bool {
        self.lo.cmp_rational(q) != Ordering::Greater && self.hi.cmp_rational(q) != Ordering::Less
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Widens the endpoints outward to `bits` significant bits.
    pub fn round_bits(&self, bits: u32) -> Interval {
        Interval {
            lo: self.lo.round(bits, Rounding::Down),
            hi: self.hi.round(bits, Rounding::Up),
        }
    }

    pub fn round(&self, p: Precision) -> Interval {
        self.round_bits(p.result_bits())
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    pub fn add(&self, other: &Interval, p: Precision) -> Interval {
        self.add_bits(other, p.result_bits())
    }

    pub fn sub(&self, other: &Interval, p: Precision) -> Interval {
        self.sub_bits(other, p.result_bits())
    }

    pub fn mul(&self, other: &Interval, p: Precision) -> Interval {
        self.mul_bits(other, p.result_bits())
    }

    pub fn div(&self, other: &Interval, p: Precision) -> Result<Interval> {
        self.div_bits(other, p.result_bits())
    }

    pub fn sqrt(&self, p: Precision) -> Result<Interval> {
        self.sqrt_bits(p.result_bits())
    }

    pub(crate) fn add_bits(&self, other: &Interval, bits: u32) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo).round(bits, Rounding::Down),
            hi: self.hi.add(&other.hi).round(bits, Rounding::Up),
        }
    }

    pub(crate) fn sub_bits(&self, other: &Interval, bits: u32) -> Interval {
        Interval {
            lo: self.lo.sub(&other.hi).round(bits, Rounding::Down),
            hi: self.hi.sub(&other.lo).round(bits, Rounding::Up),
        }
    }

    pub(crate) fn mul_bits(&self, other: &Interval, bits: u32) -> Interval {
        let (lo, hi) = if self.lo.is_positive() && other.lo.is_positive() {
            (self.lo.mul(&other.lo), self.hi.mul(&other.hi))
        } else {
            let products = [
                self.lo.mul(&other.lo),
                self.lo.mul(&other.hi),
                self.hi.mul(&other.lo),
                self.hi.mul(&other.hi),
            ];
            let lo = products.iter().min().unwrap().clone();
            let hi = products.iter().max().unwrap().clone();
            (lo, hi)
        };
        Interval {
            lo: lo.round(bits, Rounding::Down),
            hi: hi.round(bits, Rounding::Up),
        }
    }

    pub(crate) fn div_bits(&self, other: &Interval, bits: u32) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::domain("div", "divisor interval contains zero"));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let down = a.div(b, bits, Rounding::Down);
                let up = a.div(b, bits, Rounding::Up);
                if lo.as_ref().is_none_or(|l| &down < l) {
                    lo = Some(down);
                }
                if hi.as_ref().is_none_or(|h| &up > h) {
                    hi = Some(up);
                }
            }
        }
        Ok(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Division by a positive machine integer.
    pub(crate) fn div_u64(&self, d: u64, bits: u32) -> Interval {
        debug_assert!(d > 0);
        let d = BigInt::from(d);
        let scaled = |x: &Dyadic, dir| {
            Dyadic::from_ratio(x.mantissa(), &d, bits, dir).mul_pow2(x.exponent())
        };
        Interval {
            lo: scaled(&self.lo, Rounding::Down),
            hi: scaled(&self.hi, Rounding::Up),
        }
    }

    pub(crate) fn sqrt_bits(&self, bits: u32) -> Result<Interval> {
        if self.lo.is_negative() {
            return Err(Error::domain("sqrt", "negative operand"));
        }
        Ok(Interval {
            lo: self.lo.sqrt(bits, Rounding::Down),
            hi: self.hi.sqrt(bits, Rounding::Up),
        })
    }
}

/// Certified `x < y`: true iff `x.hi < y.lo`, false iff `y.hi <= x.lo`.
pub fn certainly_lt(x: &Interval, y: &Interval) -> TriState {
    if x.hi < y.lo {
        TriState::CertainlyTrue
    } else if y.hi <= x.lo {
        TriState::CertainlyFalse
    } else {
        TriState::Undecided
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}
