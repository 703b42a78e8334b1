//! The normalized factorial sequences and their per-step inequalities.
//!
//! With `a_n = n! / (sqrt(n) n^n e^-n)` and `b_n = ln a_n`, the substitution
//! `k = 1/(2n+1)` turns `(n+1)/n` into `(1+k)/(1-k)`, so
//!
//! ```text
//! b_n - b_{n+1} = sum_{i>=1} k^(2i) / (2i+1)  in  (0, 1/(4n) - 1/(4(n+1)))
//! ```
//!
//! Every real quantity here is returned as a certified [`Interval`].

use std::collections::BTreeMap;

use crate::enclosure::{self, certainly_lt, Dyadic, Interval, Precision, Rounding, TriState};
use crate::error::{Error, Result};
use crate::exactcore::{self, rational_sub, ExactRational, Natural};

/// Largest `n` for which `ln n!` is taken from the exact factorial.
pub const EXACT_FACTORIAL_THRESHOLD: u64 = 10_000;

/// Above the threshold, consecutive integers are multiplied exactly until
/// the partial product reaches this many bits, then its logarithm is taken.
const LN_CHUNK_BITS: u64 = 4096;

/// Per-n bundle of the proof's quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct StirlingRow {
    pub n: u64,
    pub k: ExactRational,
    pub a: Interval,
    pub b: Interval,
    /// `b_n - b_{n+1}` from its series.
    pub b_diff: Interval,
    /// `1/(4n) - 1/(4(n+1))`, exact.
    pub tail: ExactRational,
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

/// Bits needed to hold `ln n!` to `p` bits absolute.
fn log_working_bits(n: u64, p: Precision) -> u32 {
    let nb = bit_length(n);
    p.working_bits() + nb + bit_length(nb as u64) + 1
}

/// `k = 1/(2n+1)`
pub fn k_of(n: u64) -> Result<ExactRational> {
    require_positive("k_of", n)?;
    Ok(ExactRational::recip_of(2 * n + 1))
}

/// `1/(4n) - 1/(4(n+1))`, which reduces to `1/(4n(n+1))`.
pub fn tail_of(n: u64) -> Result<ExactRational> {
    require_positive("tail_of", n)?;
    Ok(rational_sub(
        &ExactRational::recip_of(4 * n),
        &ExactRational::recip_of(4 * (n + 1)),
    ))
}

/// `ln x` for an exact natural, at `bits` working precision.
fn ln_natural(x: &Natural, bits: u32) -> Interval {
    let iv = Interval::from_natural(x).round_bits(bits);
    enclosure::ln_bits(&iv, bits).expect("natural is positive")
}

/// `ln n!` as a sum of logarithms of exact partial products of `lo..=hi`.
fn ln_range_product(lo: u64, hi: u64, bits: u32) -> Interval {
    let mut sum = Interval::zero();
    let mut chunk = Natural::from(1u32);
    for i in lo..=hi {
        chunk *= i;
        if chunk.bits() >= LN_CHUNK_BITS {
            sum = sum.add_bits(&ln_natural(&chunk, bits), bits);
            chunk = Natural::from(1u32);
        }
    }
    if chunk > Natural::from(1u32) {
        sum = sum.add_bits(&ln_natural(&chunk, bits), bits);
    }
    sum
}

fn ln_factorial_bits(n: u64, bits: u32) -> Interval {
    if n <= 1 {
        Interval::zero()
    } else if n <= EXACT_FACTORIAL_THRESHOLD {
        ln_natural(&exactcore::factorial(n), bits)
    } else {
        ln_range_product(2, n, bits)
    }
}

/// Encloses `ln n!`.
pub fn ln_factorial(n: u64, p: Precision) -> Interval {
    ln_factorial_bits(n, log_working_bits(n, p)).round(p.with_extra(16))
}

/// `b_n` from an enclosure of `ln n!`: `ln n! - (n + 1/2) ln n + n`.
pub fn b_from_ln_factorial(n: u64, ln_fact: &Interval, p: Precision) -> Interval {
    let bits = log_working_bits(n, p);
    let ln_n = enclosure::ln_point(&Dyadic::from_int(n as i64), bits);
    let weight = Interval::point(Dyadic::from_int(2 * n as i64 + 1).mul_pow2(-1));
    ln_fact
        .sub_bits(&ln_n.mul_bits(&weight, bits), bits)
        .add_bits(&Interval::from_int(n as i64), bits)
        .round(p)
}

/// `b_n = ln a_n`.
pub fn b_of(n: u64, p: Precision) -> Result<Interval> {
    require_positive("b_of", n)?;
    let lnf = ln_factorial_bits(n, log_working_bits(n, p));
    Ok(b_from_ln_factorial(n, &lnf, p))
}

/// `a_n = exp(b_n)` given an enclosure of `b_n`.
pub fn a_from_b(b: &Interval, p: Precision) -> Interval {
    enclosure::exp(b, p)
}

/// `a_n = n! / (sqrt(n) n^n e^-n)`, evaluated as `exp(b_n)`.
pub fn a_of(n: u64, p: Precision) -> Result<Interval> {
    let b = b_of(n, p.with_extra(4))?;
    Ok(a_from_b(&b, p))
}

/// `a_n / a_{n+1} = (1/e) ((n+1)/n)^((2n+1)/2)`.
pub fn ratio_of(n: u64, p: Precision) -> Result<Interval> {
    require_positive("ratio_of", n)?;
    let wp = p.with_extra(Precision::GUARD_BITS + bit_length(n));
    let base = ExactRational::new(n + 1, n)?;
    let exponent = ExactRational::new(2 * n + 1, 2)?;
    let power = enclosure::pow_rational(&Interval::from_rational(&base, wp), &exponent, wp)?;
    let e = enclosure::constant_e(wp);
    Ok(power.div(&e, wp)?.round(p))
}

/// `b_n - b_{n+1} = sum_{i>=1} k^(2i)/(2i+1)`, truncated once the
/// geometric tail `k^(2m+2)/(1-k^2)` is negligible and closed with it.
pub fn b_diff_series(n: u64, p: Precision) -> Result<Interval> {
    let k = k_of(n)?;
    let bits = p.working_bits();
    let k_sq = &k * &k;
    let step = Interval::from_rational_bits(&k_sq, bits);
    let one_minus = Dyadic::from_rational(&(ExactRational::one() - k_sq.clone()), bits, Rounding::Down);
    let target = Dyadic::from_rational(&k_sq, bits, Rounding::Down).mul_pow2(-(bits as i64) - 4);

    let mut power = step.clone();
    let mut sum = Interval::zero();
    let mut i: u64 = 1;
    let tail = loop {
        sum = sum.add_bits(&power.div_u64(2 * i + 1, bits), bits);
        power = power.mul_bits(&step, bits);
        let tail = power.hi().div(&one_minus, bits, Rounding::Up);
        if tail < target {
            break tail;
        }
        i += 1;
    };
    Ok(Interval::from_ordered(sum.lo().clone(), sum.hi().add(&tail)).round(p))
}

/// `e^(3/4)`, the proof's floor for `a_n`.
pub fn lower_bound_const(p: Precision) -> Interval {
    let three_quarters = Interval::point(Dyadic::new(3.into(), -2));
    enclosure::exp(&three_quarters, p)
}

pub fn row_of(n: u64, p: Precision) -> Result<StirlingRow> {
    let k = k_of(n)?;
    let b = b_of(n, p.with_extra(4))?;
    Ok(StirlingRow {
        n,
        k,
        a: a_from_b(&b, p),
        b: b.round(p),
        b_diff: b_diff_series(n, p)?,
        tail: tail_of(n)?,
    })
}

impl StirlingRow {
    /// Whether `0 < b_diff < tail` is certified.
    pub fn window_certified(&self, p: Precision) -> TriState {
        let positive = if self.b_diff.lo().is_positive() {
            TriState::CertainlyTrue
        } else {
            TriState::Undecided
        };
        positive.and(certainly_lt(&self.b_diff, &Interval::from_rational(&self.tail, p)))
    }
}

/// Walks `n, n+1, ...` keeping `ln n!` available at any precision.
///
/// Up to [`EXACT_FACTORIAL_THRESHOLD`] the exact factorial is carried and
/// updated by one multiplication per step. Beyond it, running enclosures of
/// `ln n!` are kept per precision and extended by `ln(n+1)`; a precision
/// requested for the first time is seeded from scratch.
#[derive(Debug, Clone)]
pub struct FactorialCursor {
    n: u64,
    exact: Option<Natural>,
    running: BTreeMap<u32, Interval>,
}

impl FactorialCursor {
    pub fn new(n: u64) -> Self {
        let exact = (n <= EXACT_FACTORIAL_THRESHOLD).then(|| exactcore::factorial(n));
        FactorialCursor {
            n,
            exact,
            running: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn advance(&mut self) {
        self.n += 1;
        let n = self.n;
        match self.exact.take() {
            Some(f) if n <= EXACT_FACTORIAL_THRESHOLD => self.exact = Some(f * n),
            _ => {
                let ln_n = Dyadic::from_int(n as i64);
                for (&bits, sum) in self.running.iter_mut() {
                    *sum = sum.add_bits(&enclosure::ln_point(&ln_n, bits), bits);
                }
            }
        }
    }

    /// Enclosure of `ln n!` at the working precision used by [`b_of`].
    pub fn ln_factorial(&mut self, p: Precision) -> Interval {
        let bits = log_working_bits(self.n, p);
        if let Some(f) = &self.exact {
            return if self.n <= 1 { Interval::zero() } else { ln_natural(f, bits) };
        }
        let n = self.n;
        self.running
            .entry(bits)
            .or_insert_with(|| ln_factorial_bits(n, bits))
            .clone()
    }

    pub fn b(&mut self, p: Precision) -> Interval {
        let lnf = self.ln_factorial(p);
        b_from_ln_factorial(self.n, &lnf, p)
    }
}
