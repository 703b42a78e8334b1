//! Range checks for every inequality and identity behind the proof.
//!
//! Each comparison is retried at doubling precision from `p_start` until it
//! is certified or `p_max` has been tried. Only a certified outcome counts:
//! overlapping enclosures are recorded as undecided, never as pass.
//!
//! Ranges are cut into chunks whose boundaries depend only on the config, so
//! the report does not change with the number of workers. Each chunk starts
//! from freshly computed exact state and then updates it incrementally.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enclosure::{certainly_lt, Dyadic, Interval, Precision, Rounding, TriState};
use crate::error::{Error, Result};
use crate::exactcore::{double_fact_even, double_fact_odd, factorial, ExactRational, Natural};
use crate::sequences::{self, FactorialCursor, EXACT_FACTORIAL_THRESHOLD};
use crate::stirling;

/// Canonical check order; also the report order.
pub const CHECK_NAMES: [&str; 7] = [
    "exact-identities",
    "a-decreasing",
    "bdiff-window",
    "shifted-increasing",
    "paper-floor",
    "derived-floor",
    "derived-limits",
];

/// Failures kept per result; the rest are only counted.
pub const MAX_RECORDED_FAILURES: usize = 100;

const SMALL_CHUNK: u64 = 512;
const LARGE_CHUNK: u64 = 65_536;

/// `(pi/2 - W_n) n` stays below `pi/8`; frozen at 0.60.
const WALLIS_BAND: (u64, u64) = (3, 5);
/// `(L_n - sqrt(pi)) n` peaks at 0.2275 for n = 1; frozen at 0.35.
const LEMMA_BAND: (u64, u64) = (7, 20);
/// `a_n - sqrt(2 pi)` against `(e^(1/(4n)) - 1) sqrt(2 pi)` times 11/10.
const STIRLING_BAND: (u64, u64) = (11, 10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    ExactIdentities,
    ADecreasing,
    BdiffWindow,
    ShiftedIncreasing,
    PaperFloor,
    DerivedFloor,
    DerivedLimits,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::ExactIdentities,
        Check::ADecreasing,
        Check::BdiffWindow,
        Check::ShiftedIncreasing,
        Check::PaperFloor,
        Check::DerivedFloor,
        Check::DerivedLimits,
    ];

    pub fn name(self) -> &'static str {
        CHECK_NAMES[self as usize]
    }

    /// Resolves a selector: a full result name or one of the short forms
    /// `exact`, `a-decreasing`, `bdiff`, `shifted`, `floor`, `limits`, `all`.
    pub fn select(selector: &str) -> Result<Vec<Check>> {
        let s = selector.trim();
        let picked = match s {
            "all" => Check::ALL.to_vec(),
            "exact" => vec![Check::ExactIdentities],
            "bdiff" => vec![Check::BdiffWindow],
            "shifted" => vec![Check::ShiftedIncreasing],
            "floor" => vec![Check::PaperFloor, Check::DerivedFloor],
            "limits" => vec![Check::DerivedLimits],
            _ => match Check::ALL.iter().find(|c| c.name() == s) {
                Some(&c) => vec![c],
                None => {
                    return Err(Error::domain("check selector", format!("unknown check `{s}`")));
                }
            },
        };
        Ok(picked)
    }

    /// Parses a comma separated selector list into canonical order.
    pub fn parse_list(list: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in list.split(',').filter(|p| !p.trim().is_empty()) {
            out.extend(Check::select(part)?);
        }
        if out.is_empty() {
            return Err(Error::domain("check selector", "no checks selected"));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl Serialize for Check {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Check {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub p_start: Precision,
    pub p_max: Precision,
    pub checks: Vec<Check>,
    /// Thread count; not part of the report.
    #[serde(skip, default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            n_min: 1,
            n_max: 10_000,
            p_start: Precision::new(53).unwrap(),
            p_max: Precision::new(256).unwrap(),
            checks: Check::ALL.to_vec(),
            workers: default_workers(),
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 {
            return Err(Error::domain("check config", "n_min must be at least 1"));
        }
        if self.n_min > self.n_max {
            return Err(Error::domain("check config", "n_min exceeds n_max"));
        }
        if self.p_start > self.p_max {
            return Err(Error::domain("check config", "p_start exceeds p_max"));
        }
        if self.workers == 0 {
            return Err(Error::domain("check config", "workers must be at least 1"));
        }
        Ok(())
    }

    /// `p_start, 2 p_start, ...` capped by `p_max`, which is always tried last.
    pub fn schedule(&self) -> Vec<Precision> {
        let mut out = vec![self.p_start];
        let mut bits = self.p_start.bits();
        while bits < self.p_max.bits() {
            bits = bits.saturating_mul(2).min(self.p_max.bits());
            out.push(Precision::new(bits).expect("above minimum"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub n_min: u64,
    pub n_max: u64,
    pub status: Status,
    pub max_bits: u32,
    pub failures: Vec<Failure>,
    /// Failures beyond [`MAX_RECORDED_FAILURES`].
    pub omitted_failures: u64,
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: CheckConfig,
    pub results: Vec<CheckResult>,
    pub total_ms: u64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Outcome of one instance at one precision.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Fails(String),
    Undecided,
}

impl Verdict {
    fn from_tri(t: TriState, detail: impl FnOnce() -> String) -> Verdict {
        match t {
            TriState::CertainlyTrue => Verdict::Holds,
            TriState::CertainlyFalse => Verdict::Fails(detail()),
            TriState::Undecided => Verdict::Undecided,
        }
    }

    /// First failure wins; otherwise undecided unless both hold.
    fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Fails(_) => self,
            Verdict::Holds => other(),
            Verdict::Undecided => match other() {
                f @ Verdict::Fails(_) => f,
                _ => Verdict::Undecided,
            },
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    failures: Vec<Failure>,
    omitted: u64,
    failed: bool,
    undecided: bool,
    max_bits: u32,
}

impl Tally {
    fn record(&mut self, n: u64, detail: String) {
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(Failure { n, detail });
        } else {
            self.omitted += 1;
        }
    }

    fn merge(&mut self, other: Tally) {
        for f in other.failures {
            self.record(f.n, f.detail);
        }
        self.omitted += other.omitted;
        self.failed |= other.failed;
        self.undecided |= other.undecided;
        self.max_bits = self.max_bits.max(other.max_bits);
    }

    /// Runs one instance through the precision schedule.
    fn decide(&mut self, n: u64, schedule: &[Precision], mut f: impl FnMut(Precision) -> Verdict) {
        for &p in schedule {
            self.max_bits = self.max_bits.max(p.bits());
            match f(p) {
                Verdict::Holds => return,
                Verdict::Fails(detail) => {
                    self.failed = true;
                    self.record(n, format!("{detail} at {} bits", p.bits()));
                    return;
                }
                Verdict::Undecided => {}
            }
        }
        self.undecided = true;
        let last = schedule.last().map_or(0, |p| p.bits());
        self.record(n, format!("undecided at {last} bits"));
    }

    fn finish(self, check: Check, n_min: u64, n_max: u64, started: Instant) -> CheckResult {
        let status = if self.failed {
            Status::Fail
        } else if self.undecided {
            Status::Undecided
        } else {
            Status::Pass
        };
        CheckResult {
            name: check.name().to_string(),
            n_min,
            n_max,
            status,
            max_bits: self.max_bits,
            failures: self.failures,
            omitted_failures: self.omitted,
            ms: started.elapsed().as_millis() as u64,
        }
    }
}

/// Fixed chunking of `[lo, hi]`.
fn chunks(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let len = if start <= EXACT_FACTORIAL_THRESHOLD {
            SMALL_CHUNK
        } else {
            LARGE_CHUNK
        };
        let end = start.saturating_add(len - 1).min(hi);
        out.push((start, end));
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

fn run_chunked(
    cfg: &CheckConfig,
    lo: u64,
    hi: u64,
    work: impl Fn(u64, u64, &[Precision]) -> Tally + Sync,
) -> Tally {
    let schedule = cfg.schedule();
    let parts = if lo > hi { Vec::new() } else { chunks(lo, hi) };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    let tallies: Vec<Tally> = pool.install(|| {
        parts
            .par_iter()
            .map(|&(a, b)| work(a, b, &schedule))
            .collect()
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    total
}

/// Exact state for `n`: `n!`, `(2n)!`, `(2n)!!`, `(2n-1)!!`.
#[derive(Debug, Clone)]
pub struct ExactSweep {
    n: u64,
    fact: Natural,
    fact_double: Natural,
    even: Natural,
    odd: Natural,
}

impl ExactSweep {
    pub fn new(n: u64) -> Self {
        ExactSweep {
            n,
            fact: factorial(n),
            fact_double: factorial(2 * n),
            even: double_fact_even(n),
            odd: double_fact_odd(n),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn advance(&mut self) {
        let m = self.n + 1;
        self.fact *= m;
        self.fact_double *= (2 * m - 1) * (2 * m);
        self.even *= 2 * m;
        self.odd *= 2 * m - 1;
        self.n = m;
    }

    /// Checks the identities at the current `n`; returns the first violated.
    pub fn check(&self) -> std::result::Result<(), String> {
        let n = self.n;
        if &self.even * &self.odd != self.fact_double {
            return Err("(2n)!! (2n-1)!! != (2n)!".into());
        }
        if self.even != &self.fact << n {
            return Err("(2n)!! != 2^n n!".into());
        }
        // The expanded Wallis form and W_n (2n+1) = (4^n n!^2/(2n)!)^2 are both
        // equalities of squares of positive ratios, so the ratios are compared:
        // (2n)!!/(2n-1)!! = 4^n n!^2/(2n)!.
        let central_num = (&self.fact * &self.fact) << (2 * n);
        if &self.even * &self.fact_double != &central_num * &self.odd {
            return Err("expanded Wallis form != W_n".into());
        }
        Ok(())
    }
}

/// Exact identities for every `n` in `[lo, hi]`, including `n = 0`.
pub fn exact_identity_failures(lo: u64, hi: u64) -> Vec<Failure> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut sweep = ExactSweep::new(lo);
    loop {
        if let Err(detail) = sweep.check() {
            out.push(Failure { n: sweep.n(), detail });
        }
        if sweep.n() == hi {
            break;
        }
        sweep.advance();
    }
    out
}

pub fn check_exact_identities(cfg: &CheckConfig) -> CheckResult {
    let started = Instant::now();
    let tally = run_chunked(cfg, cfg.n_min, cfg.n_max, |a, b, _| {
        let mut t = Tally::default();
        for f in exact_identity_failures(a, b) {
            t.failed = true;
            t.record(f.n, f.detail);
        }
        t
    });
    tally.finish(Check::ExactIdentities, cfg.n_min, cfg.n_max, started)
}

#[derive(Debug, Clone, Copy)]
enum Quantity {
    A,
    B,
    Shifted,
}

fn quarter_recip(n: u64, p: Precision) -> Interval {
    Interval::from_rational(&ExactRational::recip_of(4 * n), p)
}

impl Quantity {
    fn from_cursor(self, cursor: &mut FactorialCursor, p: Precision) -> Interval {
        match self {
            Quantity::A => sequences::a_from_b(&cursor.b(p.with_extra(4)), p),
            Quantity::B => cursor.b(p),
            Quantity::Shifted => cursor.b(p).sub(&quarter_recip(cursor.n(), p), p),
        }
    }

    fn direct(self, n: u64, p: Precision) -> Interval {
        match self {
            Quantity::A => sequences::a_of(n, p).expect("n >= 1"),
            Quantity::B => sequences::b_of(n, p).expect("n >= 1"),
            Quantity::Shifted => sequences::b_of(n, p).expect("n >= 1").sub(&quarter_recip(n, p), p),
        }
    }
}

/// Values of a quantity at `n` and `n + 1`, memoized per precision.
struct PairWalker {
    q: Quantity,
    n: u64,
    cursor: FactorialCursor,
    here: BTreeMap<u32, Interval>,
    next: BTreeMap<u32, Interval>,
}

impl PairWalker {
    fn new(q: Quantity, n: u64) -> Self {
        PairWalker {
            q,
            n,
            cursor: FactorialCursor::new(n + 1),
            here: BTreeMap::new(),
            next: BTreeMap::new(),
        }
    }

    fn pair(&mut self, p: Precision) -> (Interval, Interval) {
        let (q, n) = (self.q, self.n);
        let here = self
            .here
            .entry(p.bits())
            .or_insert_with(|| q.direct(n, p))
            .clone();
        let cursor = &mut self.cursor;
        let next = self
            .next
            .entry(p.bits())
            .or_insert_with(|| q.from_cursor(cursor, p))
            .clone();
        (here, next)
    }

    fn advance(&mut self) {
        self.here = std::mem::take(&mut self.next);
        self.cursor.advance();
        self.n += 1;
    }
}

fn pairwise(
    cfg: &CheckConfig,
    check: Check,
    q: Quantity,
    verdict: impl Fn(u64, &Interval, &Interval, Precision) -> Verdict + Sync,
) -> CheckResult {
    let started = Instant::now();
    let tally = run_chunked(cfg, cfg.n_min, cfg.n_max - 1, |a, b, schedule| {
        let mut t = Tally::default();
        let mut walker = PairWalker::new(q, a);
        for n in a..=b {
            t.decide(n, schedule, |p| {
                let (here, next) = walker.pair(p);
                verdict(n, &here, &next, p)
            });
            if n < b {
                walker.advance();
            }
        }
        t
    });
    tally.finish(check, cfg.n_min, cfg.n_max, started)
}

/// `a_{n+1} < a_n`.
pub fn check_a_decreasing(cfg: &CheckConfig) -> CheckResult {
    pairwise(cfg, Check::ADecreasing, Quantity::A, |_, here, next, _| {
        Verdict::from_tri(certainly_lt(next, here), || "a_{n+1} >= a_n".into())
    })
}

/// `0 < b_n - b_{n+1} < 1/(4n) - 1/(4(n+1))`, with the series enclosure
/// cross-checked against the difference of the two `b` enclosures.
pub fn check_bdiff_window(cfg: &CheckConfig) -> CheckResult {
    pairwise(cfg, Check::BdiffWindow, Quantity::B, |n, here, next, p| {
        let series = sequences::b_diff_series(n, p).expect("n >= 1");
        let positive = if series.lo().is_positive() {
            TriState::CertainlyTrue
        } else if !series.hi().is_positive() {
            TriState::CertainlyFalse
        } else {
            TriState::Undecided
        };
        let tail = Interval::from_rational(&sequences::tail_of(n).expect("n >= 1"), p);
        let direct = here.sub(next, p);
        Verdict::from_tri(positive, || "b_n - b_{n+1} <= 0".into())
            .and(|| Verdict::from_tri(certainly_lt(&series, &tail), || "b_n - b_{n+1} >= tail".into()))
            .and(|| {
                if series.overlaps(&direct) {
                    Verdict::Holds
                } else {
                    Verdict::Fails("series and direct difference disagree".into())
                }
            })
    })
}

/// `b_n - 1/(4n) < b_{n+1} - 1/(4(n+1))`.
pub fn check_shifted_increasing(cfg: &CheckConfig) -> CheckResult {
    pairwise(cfg, Check::ShiftedIncreasing, Quantity::Shifted, |_, here, next, _| {
        Verdict::from_tri(certainly_lt(here, next), || "b_n - 1/(4n) is not increasing".into())
    })
}

fn floor_check(cfg: &CheckConfig, check: Check, floor: fn(Precision) -> Interval, label: &'static str) -> CheckResult {
    let started = Instant::now();
    let tally = run_chunked(cfg, cfg.n_min, cfg.n_max, |a, b, schedule| {
        let mut t = Tally::default();
        let mut cursor = FactorialCursor::new(a);
        let floors: BTreeMap<u32, Interval> = schedule.iter().map(|&p| (p.bits(), floor(p))).collect();
        for n in a..=b {
            t.decide(n, schedule, |p| {
                let a_n = Quantity::A.from_cursor(&mut cursor, p);
                Verdict::from_tri(certainly_lt(&floors[&p.bits()], &a_n), || format!("a_n <= {label}"))
            });
            if n < b {
                cursor.advance();
            }
        }
        t
    });
    tally.finish(check, cfg.n_min, cfg.n_max, started)
}

/// `e^(3/4) < a_n`.
pub fn check_paper_floor(cfg: &CheckConfig) -> CheckResult {
    floor_check(cfg, Check::PaperFloor, sequences::lower_bound_const, "e^(3/4)")
}

/// `sqrt(2 pi) < a_n`.
pub fn check_derived_floor(cfg: &CheckConfig) -> CheckResult {
    floor_check(cfg, Check::DerivedFloor, stirling::sqrt_two_pi, "sqrt(2 pi)")
}

/// `4^n n!^2` and `(2n)!`, kept unreduced.
fn central_parts(n: u64) -> (BigInt, BigInt) {
    let f = factorial(n);
    (BigInt::from((&f * &f) << (2 * n)), BigInt::from(factorial(2 * n)))
}

fn ratio_interval(num: &BigInt, den: &BigInt, bits: u32) -> Interval {
    Interval::new(
        Dyadic::from_ratio(num, den, bits, Rounding::Down),
        Dyadic::from_ratio(num, den, bits, Rounding::Up),
    )
    .expect("ordered")
}

fn band(c: (u64, u64), n: u64, p: Precision) -> Interval {
    Interval::from_rational(&ExactRational::new(c.0, c.1 * n).expect("positive"), p)
}

fn residual_within(value: &Interval, limit: &Interval, width: &Interval, p: Precision, what: &str) -> Verdict {
    let above = Verdict::from_tri(certainly_lt(limit, value), || format!("{what} not above its limit"));
    above.and(|| {
        Verdict::from_tri(certainly_lt(&value.sub(limit, p), width), || format!("{what} outside its band"))
    })
}

/// Limit residuals at `n`. Bands are empirical, not part of the proof.
pub fn limit_verdict(n: u64, parts: &(BigInt, BigInt), p: Precision) -> Verdict {
    let wp = p.with_extra(Precision::GUARD_BITS);
    let central = ratio_interval(&parts.0, &parts.1, wp.working_bits());
    let wallis = central.mul(&central, wp).div(&Interval::from_int(2 * n as i64 + 1), wp).expect("nonzero");
    let half_pi = stirling::half_pi(wp);
    let lemma = central.div(&Interval::from_int(n as i64).sqrt(wp).expect("positive"), wp).expect("nonzero");
    let a_n = sequences::a_of(n, wp).expect("n >= 1");
    let sqrt_two_pi = stirling::sqrt_two_pi(wp);
    let stirling_width = stirling::relative_error_bound(n, wp)
        .expect("n >= 1")
        .mul(&sqrt_two_pi, wp)
        .mul(&band(STIRLING_BAND, 1, wp), wp);

    Verdict::from_tri(certainly_lt(&wallis, &half_pi), || "W_n >= pi/2".into())
        .and(|| {
            Verdict::from_tri(
                certainly_lt(&half_pi.sub(&wallis, wp), &band(WALLIS_BAND, n, wp)),
                || "pi/2 - W_n outside its band".into(),
            )
        })
        .and(|| residual_within(&lemma, &stirling::sqrt_pi(wp), &band(LEMMA_BAND, n, wp), wp, "L_n"))
        .and(|| residual_within(&a_n, &sqrt_two_pi, &stirling_width, wp, "a_n"))
}

/// Wallis, lemma and Stirling residuals at `n = n_max`.
pub fn check_limits(cfg: &CheckConfig) -> CheckResult {
    let started = Instant::now();
    let n = cfg.n_max;
    let parts = central_parts(n);
    let mut t = Tally::default();
    t.decide(n, &cfg.schedule(), |p| limit_verdict(n, &parts, p));
    t.finish(Check::DerivedLimits, n, n, started)
}

pub fn run_check(check: Check, cfg: &CheckConfig) -> CheckResult {
    match check {
        Check::ExactIdentities => check_exact_identities(cfg),
        Check::ADecreasing => check_a_decreasing(cfg),
        Check::BdiffWindow => check_bdiff_window(cfg),
        Check::ShiftedIncreasing => check_shifted_increasing(cfg),
        Check::PaperFloor => check_paper_floor(cfg),
        Check::DerivedFloor => check_derived_floor(cfg),
        Check::DerivedLimits => check_limits(cfg),
    }
}

pub fn run_all(cfg: &CheckConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    let results = checks.iter().map(|&c| run_check(c, cfg)).collect();
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: CheckConfig { checks, ..cfg.clone() },
        results,
        total_ms: started.elapsed().as_millis() as u64,
    })
}
