//! Dimension budgets, the two conditions on pairs of restricted-digit sets,
//! and partial sums over the base list 3, 4, 5, 7, 11, ...

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::certified::{self, Interval};
use crate::numeral;
use crate::{Error, Result};

/// A restricted-digit set in `base` with `allowed_size` allowed digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BudgetTerm {
    pub base: u64,
    pub allowed_size: u64,
}

impl BudgetTerm {
    pub fn new(base: u64, allowed_size: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase {
                base: base as u32,
                min: 2,
            });
        }
        if allowed_size == 0 || allowed_size > base {
            return Err(Error::InvalidConstraint(alloc::format!(
                "allowed size {allowed_size} not in [1, {base}]"
            )));
        }
        Ok(BudgetTerm { base, allowed_size })
    }

    /// `log allowed_size / log base`.
    pub fn dimension(&self, prec: u32) -> Interval {
        certified::log_ratio(self.allowed_size, self.base, prec)
    }
}

/// Enclosures of `Σ log|D_i| / log p_i` and of that sum minus `k − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub terms: Vec<BudgetTerm>,
    pub sum: Interval,
    pub slack: Interval,
}

impl Budget {
    /// `Some(true)` if the sum is certainly below `k − 1`, `Some(false)` if
    /// certainly at or above, `None` if the enclosure straddles it.
    pub fn below_threshold(&self) -> Option<bool> {
        let zero = BigRational::zero();
        match self.slack.compare_rational(&zero)? {
            core::cmp::Ordering::Less => Some(true),
            _ => Some(false),
        }
    }
}

pub fn dimension_budget(terms: &[BudgetTerm], prec: u32) -> Result<Budget> {
    if terms.is_empty() {
        return Err(Error::InvalidConstraint("budget needs at least one term".into()));
    }
    let w = prec + 8;
    let dims: Vec<Interval> = terms.iter().map(|t| t.dimension(w)).collect();
    let sum = certified::sum(&dims, w);
    let k = terms.len() as i64;
    let slack = sum.add_integer(&BigInt::from(1 - k));
    Ok(Budget {
        terms: terms.to_vec(),
        sum: sum.with_precision(prec),
        slack: slack.with_precision(prec),
    })
}

fn check_pair(p: u64, q: u64, a: u64, b: u64) -> Result<()> {
    for base in [p, q] {
        if base < 2 {
            return Err(Error::InvalidBase {
                base: base as u32,
                min: 2,
            });
        }
    }
    if a >= p || b >= q {
        return Err(Error::InvalidConstraint(alloc::format!(
            "need 0 <= A < p and 0 <= B < q, got A = {a}, B = {b}, p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// Exact value of `A/(p−1) + B/(q−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgrsOutcome {
    pub value: BigRational,
    /// `value − 1`.
    pub margin: BigRational,
    pub holds: bool,
}

/// Whether `A/(p−1) + B/(q−1) >= 1`, in exact rationals.
pub fn egrs_condition(p: u64, q: u64, a: u64, b: u64) -> Result<EgrsOutcome> {
    check_pair(p, q, a, b)?;
    let value = BigRational::new(BigInt::from(a), BigInt::from(p - 1))
        + BigRational::new(BigInt::from(b), BigInt::from(q - 1));
    let margin = &value - BigRational::one();
    Ok(EgrsOutcome {
        holds: margin >= BigRational::zero(),
        value,
        margin,
    })
}

/// Result of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The enclosure still straddles the threshold at the precision cap.
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOutcome {
    /// Enclosure of `log(A+1)/log p + log(B+1)/log q`.
    pub sum: Interval,
    /// Enclosure of `sum − 1`.
    pub margin: Interval,
    pub verdict: Verdict,
    /// Whether the verdict came from exact integer arithmetic.
    pub exact: bool,
}

/// Whether `log(A+1)/log p + log(B+1)/log q >= 1`.
///
/// When `p` and `q` are powers `r^i`, `r^j` of one integer the comparison is
/// equivalent to `(A+1)^j (B+1)^i >= r^(ij)` and is decided exactly; otherwise
/// the enclosure is refined up to `precision_cap` bits.
pub fn canonical_condition(p: u64, q: u64, a: u64, b: u64, precision_cap: u32) -> Result<CanonicalOutcome> {
    check_pair(p, q, a, b)?;
    let enclose = |prec: u32| {
        let w = prec + 8;
        let sum = certified::log_ratio(a + 1, p, w).add(&certified::log_ratio(b + 1, q, w));
        let margin = sum.add_integer(&-BigInt::one());
        (sum.with_precision(prec), margin.with_precision(prec))
    };
    let cap = precision_cap.max(certified::DEFAULT_PRECISION);
    if let (Some(x), Some(y)) = (rational_log_ratio(a + 1, p), rational_log_ratio(b + 1, q)) {
        let (sum, margin) = enclose(certified::DEFAULT_PRECISION);
        let verdict = if x + y >= BigRational::one() { Verdict::Holds } else { Verdict::Fails };
        return Ok(CanonicalOutcome {
            sum,
            margin,
            verdict,
            exact: true,
        });
    }
    if numeral::multiplicatively_dependent(p, q) {
        let r = numeral::primitive_root(p);
        let i = exponent_of(p, r);
        let j = exponent_of(q, r);
        let lhs = num_traits::pow(BigUint::from(a + 1), j as usize) * num_traits::pow(BigUint::from(b + 1), i as usize);
        let rhs = num_traits::pow(BigUint::from(r), (i * j) as usize);
        let (sum, margin) = enclose(certified::DEFAULT_PRECISION);
        let verdict = if lhs >= rhs { Verdict::Holds } else { Verdict::Fails };
        return Ok(CanonicalOutcome {
            sum,
            margin,
            verdict,
            exact: true,
        });
    }
    let ((sum, margin), decided) = certified::refine(
        certified::DEFAULT_PRECISION,
        cap,
        enclose,
        |(_, m)| !m.contains_zero(),
    );
    let verdict = match (decided, margin.compare_rational(&BigRational::zero())) {
        (true, Some(core::cmp::Ordering::Greater)) => Verdict::Holds,
        (true, Some(core::cmp::Ordering::Less)) => Verdict::Fails,
        _ => Verdict::Undecided,
    };
    Ok(CanonicalOutcome {
        sum,
        margin,
        verdict,
        exact: false,
    })
}

/// `log a / log b` when it is rational.
fn rational_log_ratio(a: u64, b: u64) -> Option<BigRational> {
    if a == 1 {
        return Some(BigRational::zero());
    }
    if !numeral::multiplicatively_dependent(a, b) {
        return None;
    }
    let r = numeral::primitive_root(b);
    Some(BigRational::new(exponent_of(a, r).into(), exponent_of(b, r).into()))
}

fn exponent_of(n: u64, r: u64) -> u32 {
    let mut e = 0;
    let mut v = 1u64;
    while v < n {
        v *= r;
        e += 1;
    }
    e
}

/// The first `k` bases of 3, 4, 5, 7, 11, ...: the odd primes with 4 inserted.
pub fn special_bases(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut n = 3u64;
    while out.len() < k {
        if n == 4 || (n % 2 == 1 && numeral::is_prime(n)) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Partial sum with the first index at which it certainly exceeds 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSum {
    pub k: usize,
    pub last_base: u64,
    pub sum: Interval,
    /// Smallest `i <= k` whose partial sum is certainly `> 1` while the one
    /// before is certainly `<= 1`.
    pub crossing: Option<usize>,
}

fn partial_sum(k: usize, prec: u32, term: impl Fn(u64, u32) -> Interval) -> Result<PartialSum> {
    if k == 0 {
        return Err(Error::InvalidConstraint("k must be at least 1".into()));
    }
    let w = prec + 8 + usize::BITS - k.leading_zeros();
    let one = Interval::from_integer(1, w);
    let bases = special_bases(k);
    let mut sum = Interval::from_integer(0, w);
    let mut crossing = None;
    let mut below = true;
    for (i, &p) in bases.iter().enumerate() {
        sum = sum.add(&term(p, w));
        if crossing.is_none() && below && one.certainly_lt(&sum) {
            crossing = Some(i + 1);
        }
        below = sum.certainly_le(&one);
    }
    Ok(PartialSum {
        k,
        last_base: *bases.last().expect("k >= 1"),
        sum: sum.with_precision(prec),
        crossing,
    })
}

/// `Σ_{i<=k} 1/(p_i log p_i)` over [`special_bases`].
pub fn special_constant_partial(k: usize, prec: u32) -> Result<PartialSum> {
    partial_sum(k, prec, |p, w| {
        let ln = certified::ln_u64(p, w + 8);
        Interval::from_integer(1, w + 8)
            .div(&ln.mul_integer(&BigInt::from(p)))
            .expect("p log p > 0")
            .with_precision(w)
    })
}

/// `Σ_{i<=k} (1 − log(p_i − 1)/log p_i)` over [`special_bases`].
pub fn dimension_deficit_partial(k: usize, prec: u32) -> Result<PartialSum> {
    partial_sum(k, prec, |p, w| {
        Interval::from_integer(1, w).sub(&certified::log_ratio(p - 1, p, w))
    })
}

/// Floating-point estimate of the full series `Σ 1/(p log p)`: exact terms up
/// to `x`, plus the prime-number-theorem tail `∫_x^∞ dt/(t log² t) = 1/log x`.
/// Not certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicEstimate {
    pub x: u64,
    pub partial: f64,
    pub tail: f64,
    pub total: f64,
}

pub fn special_constant_heuristic(x: u64) -> HeuristicEstimate {
    let partial: f64 = 1.0 / (4.0 * libm::log(4.0))
        + numeral::odd_primes_below(x as usize + 1)
            .into_iter()
            .map(|p| 1.0 / (p as f64 * libm::log(p as f64)))
            .sum::<f64>();
    let tail = 1.0 / libm::log(x as f64);
    HeuristicEstimate {
        x,
        partial,
        tail,
        total: partial + tail,
    }
}
