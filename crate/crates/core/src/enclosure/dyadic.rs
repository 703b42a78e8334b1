use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactcore::ExactRational;

/// Rounding direction for endpoint arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// Exact binary rational `mantissa * 2^exponent`.
///
/// Kept canonical: the mantissa is odd, or zero with exponent zero, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    #[serde(with = "bigint_string")]
    mantissa: BigInt,
    exponent: i64,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_natural(n: &BigUint) -> Self {
        Dyadic::new(BigInt::from_biguint(Sign::Plus, n.clone()), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Significant bits in the mantissa.
    pub fn precision(&self) -> u64 {
        self.mantissa.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 - 1 + self.exponent)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    /// Exact `x * 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas stays odd
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }

    /// Rounds to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u32, dir: Rounding) -> Dyadic {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        let m = match dir {
            Rounding::Down => &self.mantissa >> shift,
            Rounding::Up => -((-&self.mantissa) >> shift),
        };
        Dyadic::new(m, self.exponent + shift as i64)
    }

    /// `num / den` rounded to `bits` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!den.is_zero(), "from_ratio with zero denominator");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let t = bits as i64 + 1 - (num.bits() as i64 - den.bits() as i64);
        let (n, d) = if t >= 0 {
            (num << t as u64, den)
        } else {
            (num, den << (-t) as u64)
        };
        let q = match dir {
            Rounding::Down => n.div_floor(&d),
            Rounding::Up => -((-n).div_floor(&d)),
        };
        Dyadic::new(q, -t).round(bits, dir)
    }

    pub fn from_rational(q: &ExactRational, bits: u32, dir: Rounding) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), bits, dir)
    }

    /// Exact quotient of two dyadics, rounded.
    pub fn div(&self, other: &Dyadic, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        let q = Dyadic::from_ratio(&self.mantissa, &other.mantissa, bits, dir);
        q.mul_pow2(self.exponent - other.exponent)
    }

    /// Square root of a non-negative dyadic rounded to `bits` bits.
    pub fn sqrt(&self, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let m = self.mantissa.magnitude();
        let target = 2 * bits as i64 + 4;
        let mut shift = (target - m.bits() as i64).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let n = m << shift as u64;
        let mut r = n.sqrt();
        if dir == Rounding::Up && &r * &r != n {
            r += 1u32;
        }
        let e = (self.exponent - shift) / 2;
        Dyadic::new(BigInt::from_biguint(Sign::Plus, r), e).round(bits, dir)
    }

    pub fn to_rational(&self) -> ExactRational {
        if self.exponent >= 0 {
            ExactRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            ExactRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
                .expect("power of two is nonzero")
        }
    }

    /// Compares against an exact rational without rounding.
    pub fn cmp_rational(&self, q: &ExactRational) -> Ordering {
        // m 2^e vs a/b  <=>  m b 2^e vs a
        let lhs = &self.mantissa * q.denom();
        if self.exponent >= 0 {
            (lhs << self.exponent as u64).cmp(q.numer())
        } else {
            lhs.cmp(&(q.numer() << (-self.exponent) as u64))
        }
    }

    /// Nearest `f64`, saturating to infinity outside its range. Display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mantissa.bits() as i64;
        let shift = (len - 60).max(0);
        let m = (&self.mantissa >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + shift;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (la, lb) = (self.log2_floor().unwrap(), other.log2_floor().unwrap());
        if la != lb {
            let by_mag = la.cmp(&lb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
