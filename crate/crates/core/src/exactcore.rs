//! Exact integer and rational arithmetic.
//!
//! Factorials and double factorials are built with a balanced product tree
//! so both operands of every big multiplication stay comparable in size.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-size non-negative integer.
pub type Natural = BigUint;

/// Ranges shorter than this are multiplied left to right in machine words.
const LEAF_TERMS: u64 = 16;

/// Product of the arithmetic progression `start, start + step, ...` with
/// `count` terms, split recursively into halves.
fn progression_product(start: u64, step: u64, count: u64) -> Natural {
    if count == 0 {
        return Natural::one();
    }
    if count <= LEAF_TERMS {
        let mut acc = Natural::one();
        let mut word: u64 = 1;
        for i in 0..count {
            let term = start + i * step;
            match word.checked_mul(term) {
                Some(w) => word = w,
                None => {
                    acc *= word;
                    word = term;
                }
            }
        }
        return acc * word;
    }
    let half = count / 2;
    progression_product(start, step, half) * progression_product(start + half * step, step, count - half)
}

/// Product of the integers in `lo..=hi`; one when the range is empty.
pub fn range_product(lo: u64, hi: u64) -> Natural {
    if lo > hi {
        return Natural::one();
    }
    progression_product(lo, 1, hi - lo + 1)
}

/// `n!`
pub fn factorial(n: u64) -> Natural {
    range_product(2, n)
}

/// `(2n)!! = 2 * 4 * ... * 2n`
pub fn double_fact_even(n: u64) -> Natural {
    progression_product(2, 2, n)
}

/// `(2n-1)!! = 1 * 3 * ... * (2n-1)`
pub fn double_fact_odd(n: u64) -> Natural {
    progression_product(1, 2, n)
}

/// Exact rational number, always stored reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `num / den`, reducing the fraction.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::domain("rational", "zero denominator"));
        }
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    /// `1 / den` for a positive machine integer.
    pub fn recip_of(den: u64) -> Self {
        assert!(den > 0, "recip_of(0)");
        ExactRational(BigRational::new(BigInt::one(), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("rational", "reciprocal of zero"));
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Checked division.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::domain("rational", "division by zero"));
        }
        Ok(ExactRational(&self.0 / &other.0))
    }

    /// Floor of the value as a big integer.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let (n, d) = (self.numer(), self.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let (n, d) = (n >> shift, d >> shift);
        num_traits::ToPrimitive::to_f64(&n).unwrap_or(f64::NAN)
            / num_traits::ToPrimitive::to_f64(&d).unwrap_or(f64::NAN)
    }
}

/// Exact reduced difference `a - b`.
pub fn rational_sub(a: &ExactRational, b: &ExactRational) -> ExactRational {
    a - b
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<Natural> for ExactRational {
    fn from(n: Natural) -> Self {
        ExactRational::from_integer(BigInt::from_biguint(Sign::Plus, n))
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &ExactRational {
    type Output = ExactRational;
    /// Panics on a zero divisor; use [`ExactRational::checked_div`] otherwise.
    fn div(self, rhs: &ExactRational) -> ExactRational {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `a/b`, integers and plain or scientific decimals such as
    /// `-12.5e-3`. Decimal input is converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::domain("parse", format!("not a rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return ExactRational::new(n, d);
        }
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if frac_part.starts_with(['+', '-']) || (int_part.is_empty() && frac_part.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let digits = if digits == "-" || digits == "+" { format!("{digits}0") } else { digits };
        let mantissa: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
        if scale >= 0 {
            Ok(ExactRational::from_integer(mantissa * p))
        } else {
            ExactRational::new(mantissa, p)
        }
    }
}
