//! Wallis partial products and the central-binomial limit built from them.
//!
//! `W_n = (2n)!!^2 / ((2n-1)!!^2 (2n+1))` increases to `pi/2`, and since
//! `(2n)!! (2n-1)!! = (2n)!` and `(2n)!! = 2^n n!` it equals
//! `2^(4n) n!^4 / ((2n)!^2 (2n+1))`. Taking square roots gives
//! `L_n = 4^n n!^2 / (sqrt(n) (2n)!)`, which decreases to `sqrt(pi)`.

use num_bigint::BigInt;

use crate::enclosure::{Interval, Precision};
use crate::error::{Error, Result};
use crate::exactcore::{double_fact_even, double_fact_odd, factorial, ExactRational, Natural};

#[derive(Debug, Clone, PartialEq)]
pub struct WallisRow {
    pub n: u64,
    /// Partial product `W_n`, exact.
    pub partial: ExactRational,
    /// `L_n = 4^n n!^2 / (sqrt(n) (2n)!)`.
    pub lemma: Interval,
    /// `4^n n!^2 / ((2n)! sqrt(2n+1))`.
    pub rescaled: Interval,
}

fn require_positive(op: &'static str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(op, "n must be at least 1"));
    }
    Ok(())
}

fn nat(x: Natural) -> BigInt {
    BigInt::from(x)
}

/// `W_n` from double factorials.
pub fn wallis_partial(n: u64) -> Result<ExactRational> {
    require_positive("wallis_partial", n)?;
    let even = nat(double_fact_even(n));
    let odd = nat(double_fact_odd(n));
    ExactRational::new(&even * &even, &odd * &odd * (2 * n + 1))
}

/// `2^(4n) n!^4 / ((2n)!^2 (2n+1))`.
pub fn lemma_ratio_squared(n: u64) -> Result<ExactRational> {
    require_positive("lemma_ratio_squared", n)?;
    let f = nat(factorial(n));
    let f_sq = &f * &f;
    let f2 = nat(factorial(2 * n));
    ExactRational::new((&f_sq * &f_sq) << (4 * n), &f2 * &f2 * (2 * n + 1))
}

/// `4^n n!^2 / (2n)!`, the exact part shared by `L_n` and its rescaling.
pub fn central_ratio(n: u64) -> ExactRational {
    let f = nat(factorial(n));
    ExactRational::new((&f * &f) << (2 * n), nat(factorial(2 * n))).expect("(2n)! > 0")
}

/// `exact / sqrt(root)` with all error confined to the root and division.
fn over_sqrt(exact: &ExactRational, root: u64, p: Precision) -> Interval {
    let wp = p.with_extra(Precision::GUARD_BITS);
    let s = Interval::from_int(root as i64).sqrt(wp).expect("positive");
    Interval::from_rational(exact, wp)
        .div(&s, wp)
        .expect("sqrt of a positive integer excludes zero")
        .round(p)
}

pub fn lemma_l_from_central(n: u64, central: &ExactRational, p: Precision) -> Interval {
    over_sqrt(central, n, p)
}

pub fn lemma_rescaled_from_central(n: u64, central: &ExactRational, p: Precision) -> Interval {
    over_sqrt(central, 2 * n + 1, p)
}

/// `L_n = 4^n n!^2 / (sqrt(n) (2n)!)`.
pub fn lemma_l(n: u64, p: Precision) -> Result<Interval> {
    require_positive("lemma_l", n)?;
    Ok(lemma_l_from_central(n, &central_ratio(n), p))
}

/// `4^n n!^2 / ((2n)! sqrt(2n+1))`, which tends to `sqrt(pi/2)`.
pub fn lemma_rescaled(n: u64, p: Precision) -> Result<Interval> {
    require_positive("lemma_rescaled", n)?;
    Ok(lemma_rescaled_from_central(n, &central_ratio(n), p))
}

pub fn wallis_row(n: u64, p: Precision) -> Result<WallisRow> {
    require_positive("wallis_row", n)?;
    let central = central_ratio(n);
    Ok(WallisRow {
        n,
        partial: wallis_partial(n)?,
        lemma: lemma_l_from_central(n, &central, p),
        rescaled: lemma_rescaled_from_central(n, &central, p),
    })
}

/// Incremental walk over `n = start, start+1, ...` keeping `W_n` and
/// `4^n n!^2/(2n)!` exact.
///
/// Each step multiplies `W` by `(2n+2)^2 / ((2n+1)(2n+3))` and the central
/// ratio by `(2n+2)/(2n+1)`.
#[derive(Debug, Clone)]
pub struct WallisSweep {
    n: u64,
    partial: ExactRational,
    central: ExactRational,
}

impl WallisSweep {
    pub fn new(start: u64) -> Result<Self> {
        Ok(WallisSweep {
            n: start,
            partial: wallis_partial(start)?,
            central: central_ratio(start),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn partial(&self) -> &ExactRational {
        &self.partial
    }

    pub fn central(&self) -> &ExactRational {
        &self.central
    }

    pub fn advance(&mut self) {
        let m = self.n;
        let step = ExactRational::new((2 * m + 2) * (2 * m + 2), (2 * m + 1) * (2 * m + 3))
            .expect("positive denominator");
        self.partial = &self.partial * &step;
        self.central = &self.central * &ExactRational::new(2 * m + 2, 2 * m + 1).expect("positive");
        self.n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::{certainly_lt, constant_pi, Dyadic};

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn partial_examples() {
        assert_eq!(wallis_partial(1).unwrap(), q("4/3"));
        assert_eq!(wallis_partial(2).unwrap(), q("64/45"));
        assert_eq!(wallis_partial(3).unwrap(), q("256/175"));
        assert!(wallis_partial(0).is_err());
    }

    #[test]
    fn expanded_form_examples() {
        assert_eq!(lemma_ratio_squared(1).unwrap(), q("4/3"));
        assert_eq!(lemma_ratio_squared(2).unwrap(), q("64/45"));
        assert_eq!(lemma_ratio_squared(50).unwrap(), wallis_partial(50).unwrap());
    }

    #[test]
    fn identities_over_a_range() {
        let mut sweep = WallisSweep::new(1).unwrap();
        for n in 1..=300u64 {
            let w = wallis_partial(n).unwrap();
            assert_eq!(sweep.partial(), &w, "n = {n}");
            assert_eq!(lemma_ratio_squared(n).unwrap(), w);
            let c = central_ratio(n);
            assert_eq!(sweep.central(), &c);
            assert_eq!(&w * &ExactRational::from((2 * n + 1) as i64), &c * &c);
            sweep.advance();
            assert!(sweep.partial() > &w);
        }
    }

    #[test]
    fn lemma_l_examples() {
        assert!(lemma_l(1, p(53)).unwrap().contains(&Dyadic::from_int(2)));
        // 4 sqrt(2) / 3 = 1.88561808316412673...
        let l2 = lemma_l(2, p(53)).unwrap();
        assert!(l2.contains_rational(&q("1.88561808316412673173558496561293077142622917")));
        assert!(lemma_l(0, p(53)).is_err());
    }

    #[test]
    fn lemma_rescaled_examples() {
        // 2/sqrt(3) and 64/(24 sqrt 5)
        let r1 = lemma_rescaled(1, p(53)).unwrap();
        assert!(r1.contains_rational(&q("1.1547005383792515290182975610039149112952035")));
        let r2 = lemma_rescaled(2, p(53)).unwrap();
        assert!(r2.contains_rational(&q("1.19256958799988783808489262332334732556832979")));
        for n in [1u64, 7, 40] {
            let back = r2_scale(n, &lemma_rescaled(n, p(64)).unwrap());
            assert!(back.overlaps(&lemma_l(n, p(64)).unwrap()), "n = {n}");
        }
    }

    fn r2_scale(n: u64, r: &Interval) -> Interval {
        let prec = p(64);
        let f = Interval::from_rational(&ExactRational::new(2 * n + 1, n).unwrap(), prec);
        r.mul(&f.sqrt(prec).unwrap(), prec)
    }

    #[test]
    fn lemma_l_decreasing_and_partial_below_half_pi() {
        let prec = p(64);
        let half_pi = constant_pi(prec).mul_pow2(-1);
        let mut prev = lemma_l(1, prec).unwrap();
        for n in 1..=200u64 {
            let next = lemma_l(n + 1, prec).unwrap();
            assert!(certainly_lt(&next, &prev).is_true(), "n = {n}");
            prev = next;
            let w = Interval::from_rational(&wallis_partial(n).unwrap(), prec);
            assert!(certainly_lt(&w, &half_pi).is_true());
        }
    }

    #[test]
    fn lemma_l_decrease_ratio_identity() {
        // (L_n / L_{n+1})^2 = (2n+1)^2 / (4n(n+1))
        for n in 1..100u64 {
            let c0 = central_ratio(n);
            let c1 = central_ratio(n + 1);
            let ratio = &(&c0 * &c0) / &(&c1 * &c1);
            let sq = &ratio * &ExactRational::new(n + 1, n).unwrap();
            let want = ExactRational::new((2 * n + 1) * (2 * n + 1), 4 * n * (n + 1)).unwrap();
            assert_eq!(sq, want);
            assert!(want > ExactRational::one());
        }
    }
}
