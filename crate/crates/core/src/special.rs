//! Digit-special integers: `n` is digit-special when, for every base `g >= 3`,
//! some digit of `0..g` is missing from its base-`g` expansion.
//!
//! Bases with `g^(g-1) > n` pass automatically (the expansion has fewer than
//! `g` digits), so only a finite checklist of bases needs testing.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::{One, ToPrimitive, Zero};

use crate::graham::ln_natural_f64;
use crate::numeral::{self, DigitConstraint, Natural};
use crate::search::{Filter, Order, Search, SearchSpec};

/// Which bases are checked for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChecklistMode {
    /// 3, 4 and the primes up to the largest prime `b` with `b^b <= n`.
    Strict,
    /// Every `g >= 3` with `g^(g-1) <= n`.
    Exhaustive,
}

impl ChecklistMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ChecklistMode::Strict => "strict",
            ChecklistMode::Exhaustive => "exhaustive",
        }
    }
}

impl core::str::FromStr for ChecklistMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "strict" => Ok(ChecklistMode::Strict),
            "exhaustive" => Ok(ChecklistMode::Exhaustive),
            _ => Err(crate::Error::InvalidConstraint(alloc::format!(
                "unknown checklist mode {s:?} (strict or exhaustive)"
            ))),
        }
    }
}

fn pow_le(g: u64, e: u64, n: &Natural) -> bool {
    num_traits::pow(Natural::from(g), e as usize) <= *n
}

/// Bases to test for `n`, ascending.
pub fn base_checklist(n: &Natural, mode: ChecklistMode) -> Vec<u32> {
    match mode {
        ChecklistMode::Strict => {
            let mut out = alloc::vec![3, 4];
            let mut p = 5u64;
            while pow_le(p, p, n) {
                if numeral::is_prime(p) {
                    out.push(p as u32);
                }
                p += 1;
            }
            out
        }
        ChecklistMode::Exhaustive => {
            let mut out = Vec::new();
            let mut g = 3u64;
            while pow_le(g, g - 1, n) {
                out.push(g as u32);
                g += 1;
            }
            out
        }
    }
}

/// Smallest `n` at which the checklist differs from that of `n - 1`, above `after`.
fn next_checklist_change(after: u64, mode: ChecklistMode) -> Option<u64> {
    let mut g = 3u64;
    loop {
        let e = match mode {
            ChecklistMode::Strict if g < 5 || !numeral::is_prime(g) => {
                g += 1;
                continue;
            }
            ChecklistMode::Strict => g,
            ChecklistMode::Exhaustive => g - 1,
        };
        let t = g.checked_pow(e as u32)?;
        if t > after {
            return Some(t);
        }
        g += 1;
    }
}

pub fn is_digit_special(n: &Natural, mode: ChecklistMode) -> bool {
    base_checklist(n, mode)
        .into_iter()
        .all(|g| numeral::misses_some_digit(n, g).expect("checklist bases are >= 3"))
}

/// Checklists for machine integers, precomputed up to `u64::MAX`.
#[derive(Debug, Clone)]
pub struct Checklists {
    mode: ChecklistMode,
    /// `(threshold, bases)`: `bases` applies from `threshold` on.
    steps: Vec<(u64, Vec<u32>)>,
}

impl Checklists {
    pub fn new(mode: ChecklistMode) -> Self {
        let mut steps = alloc::vec![(0, base_checklist(&Natural::zero(), mode))];
        let mut at = 0;
        while let Some(t) = next_checklist_change(at, mode) {
            steps.push((t, base_checklist(&Natural::from(t), mode)));
            at = t;
        }
        Checklists { mode, steps }
    }

    pub fn mode(&self) -> ChecklistMode {
        self.mode
    }

    pub fn bases(&self, n: u64) -> &[u32] {
        let i = self.steps.partition_point(|(t, _)| *t <= n) - 1;
        &self.steps[i].1
    }

    pub fn is_special(&self, n: u64) -> bool {
        self.bases(n).iter().all(|&g| numeral::misses_some_digit_u64(n, g))
    }

    /// Maximal subranges of `[lo, hi]` on which the checklist is constant.
    fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64, &[u32])> {
        let mut out = Vec::new();
        for (i, (t, bases)) in self.steps.iter().enumerate() {
            let end = self.steps.get(i + 1).map_or(u64::MAX, |(u, _)| u - 1);
            let a = lo.max(*t);
            let b = hi.min(end);
            if a <= b {
                out.push((a, b, bases.as_slice()));
            }
        }
        out
    }
}

/// Digit-special integers in `[lo, hi]` by testing each one.
pub fn real_count_scan_range(lo: u64, hi: u64, mode: ChecklistMode) -> u64 {
    let lists = Checklists::new(mode);
    lists
        .segments(lo, hi)
        .into_iter()
        .map(|(a, b, bases)| {
            (a..=b)
                .filter(|&n| bases.iter().all(|&g| numeral::misses_some_digit_u64(n, g)))
                .count() as u64
        })
        .sum()
}

/// Digit-special integers in `[lo, hi]` by enumerating the union of
/// restricted-digit systems: for the largest checklist base `g`, one search
/// per missing digit, each filtered by the remaining bases.
pub fn real_count_search(lo: &Natural, hi: &Natural, mode: ChecklistMode) -> u64 {
    if lo > hi {
        return 0;
    }
    let mut total = 0;
    let mut a = lo.clone();
    while &a <= hi {
        let bases = base_checklist(&a, mode);
        let seg_end = match a.to_u64().and_then(|v| next_checklist_change(v, mode)) {
            Some(t) => hi.clone().min(Natural::from(t - 1)),
            None => hi.clone(),
        };
        total += union_count(&a, &seg_end, &bases);
        a = seg_end + 1u32;
    }
    total
}

fn union_count(lo: &Natural, hi: &Natural, bases: &[u32]) -> u64 {
    let Some((&g0, rest)) = bases.split_last() else {
        return (hi - lo + 1u32).to_u64().expect("segment without bases lies below 9");
    };
    let filters: Vec<Filter> = rest
        .iter()
        .map(|&g| Filter::misses_some_digit(g).expect("base >= 3"))
        .collect();
    let specs: Vec<SearchSpec> = (0..g0)
        .filter_map(|d| {
            let generator = DigitConstraint::without(g0, d).ok()?;
            SearchSpec::new(generator, filters.clone(), lo.clone(), hi + 1u32).ok()
        })
        .collect();
    let mut streams: Vec<Search<'_>> = specs.iter().map(|s| Search::new(s, Order::Ascending)).collect();
    let mut heap = BinaryHeap::new();
    for (i, s) in streams.iter_mut().enumerate() {
        if let Some(v) = s.next() {
            heap.push(Reverse((v, i)));
        }
    }
    let mut count = 0;
    let mut last: Option<Natural> = None;
    while let Some(Reverse((v, i))) = heap.pop() {
        if last.as_ref() != Some(&v) {
            count += 1;
            last = Some(v);
        }
        if let Some(next) = streams[i].next() {
            heap.push(Reverse((next, i)));
        }
    }
    count
}

/// Horizon up to which [`real_count`] scans integer by integer.
pub const SCAN_LIMIT: u64 = 100_000_000;

/// `Real(N)`: digit-special `i` with `1 <= i <= N`.
pub fn real_count(n: &Natural, mode: ChecklistMode) -> u64 {
    if n.is_zero() {
        return 0;
    }
    match n.to_u64() {
        Some(v) if v <= SCAN_LIMIT => real_count_scan_range(1, v, mode),
        _ => real_count_search(&Natural::one(), n, mode),
    }
}

/// `Est(N) = N^s · Π g` over the strict checklist, with
/// `s = max(0, Σ log(g-1)/log g − (#B − 1))`. Plain `f64` arithmetic.
pub fn est(n: &Natural) -> f64 {
    libm::exp(ln_est(n))
}

/// Natural logarithm of [`est`], usable when `Est` overflows `f64`.
pub fn ln_est(n: &Natural) -> f64 {
    let bases = base_checklist(n, ChecklistMode::Strict);
    let s = est_exponent(&bases);
    let ln_prod: f64 = bases.iter().map(|&g| libm::log(g as f64)).sum();
    s * ln_natural_f64(n) + ln_prod
}

/// The exponent `s` of [`est`] for a checklist.
pub fn est_exponent(bases: &[u32]) -> f64 {
    let sum: f64 = bases
        .iter()
        .map(|&g| libm::log((g - 1) as f64) / libm::log(g as f64))
        .sum();
    (sum - (bases.len() as f64 - 1.0)).max(0.0)
}

/// One line of the census table.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub horizon: Natural,
    pub real_count: u64,
    pub est_value: f64,
    /// `log Real / log horizon`.
    pub r_exponent: Option<f64>,
    /// `log Est / log horizon`.
    pub g_exponent: Option<f64>,
}

pub fn census_row(horizon: &Natural, real_count: u64) -> CensusRow {
    let big = horizon > &Natural::one();
    let ln_h = ln_natural_f64(horizon);
    CensusRow {
        horizon: horizon.clone(),
        real_count,
        est_value: est(horizon),
        r_exponent: (big && real_count > 0).then(|| libm::log(real_count as f64) / ln_h),
        g_exponent: big.then(|| ln_est(horizon) / ln_h),
    }
}

/// Disagreements between the two checklist modes on `[1, N]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModeAudit {
    pub horizon: u64,
    pub strict_count: u64,
    pub exhaustive_count: u64,
    /// Strict-special but not exhaustive-special.
    pub strict_only: u64,
    /// Exhaustive-special but not strict-special; should stay zero.
    pub exhaustive_only: u64,
    /// Up to `witness_limit` smallest strict-only integers.
    pub witnesses: Vec<u64>,
}

pub fn audit_modes(n: u64, witness_limit: usize) -> ModeAudit {
    let strict = Checklists::new(ChecklistMode::Strict);
    let exhaustive = Checklists::new(ChecklistMode::Exhaustive);
    let mut audit = ModeAudit {
        horizon: n,
        ..ModeAudit::default()
    };
    for i in 1..=n {
        let s = strict.is_special(i);
        let e = exhaustive.is_special(i);
        audit.strict_count += s as u64;
        audit.exhaustive_count += e as u64;
        if s && !e {
            audit.strict_only += 1;
            if audit.witnesses.len() < witness_limit {
                audit.witnesses.push(i);
            }
        }
        if e && !s {
            audit.exhaustive_only += 1;
        }
    }
    audit
}
