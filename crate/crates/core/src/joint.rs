//! Counting for systems of exactly two digit constraints.
//!
//! Both expansions are refined together: a state fixes the top digits of `x`
//! in base `a` (value `v`, `r` free positions below) and in base `b` (value
//! `u`, `j` free positions), and only the difference `d = v − u` is carried.
//! The side whose completion hull is wider is refined next, so `|d|` stays
//! comparable to the current hull width and drops into `i128` after the first
//! few levels. The bottom levels are answered from a sorted table of all
//! differences `s − t` of completions.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::numeral::{DigitConstraint, Natural};

/// Largest difference table built, in entries.
const TABLE_LIMIT: u128 = 1 << 16;

/// Magnitude below which a level is handled in `i128`.
const SMALL_LIMIT: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

#[derive(Debug, Clone)]
struct Level {
    /// Which side is refined when leaving this level.
    side: Side,
    /// Place value of the digit refined when leaving this level.
    pow: BigInt,
    /// Feasible range of `d` at this level.
    lo: BigInt,
    hi: BigInt,
    small: Option<SmallLevel>,
}

#[derive(Debug, Clone, Copy)]
struct SmallLevel {
    pow: i128,
    lo: i128,
    hi: i128,
}

/// Members `x` of both `v0 + T_a(r)` and `u0 + T_b(j)`, where `T_c(k)` is the
/// set of integers below `base^k` whose `k`-digit expansion (leading zeros
/// included) uses only digits allowed by `c`.
#[derive(Debug, Clone)]
pub struct JointCounter {
    a: DigitConstraint,
    b: DigitConstraint,
    levels: Vec<Level>,
    /// First level from which every level fits in `i128`.
    small_from: usize,
    /// Sorted differences `s − t` over the completions at the last level.
    table: Vec<i64>,
}

fn repunit(base: u32, k: u32) -> BigInt {
    // (base^k − 1) / (base − 1)
    let p = num_traits::pow(BigInt::from(base), k as usize);
    (p - 1) / BigInt::from(base - 1)
}

fn completions(c: &DigitConstraint, k: u32) -> Vec<i64> {
    let mut out = alloc::vec![0i64];
    let mut place = 1i64;
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * c.allowed().len());
        for &d in c.allowed() {
            for &t in &out {
                next.push(t + d as i64 * place);
            }
        }
        out = next;
        place *= c.base() as i64;
    }
    out
}

fn fits(x: &BigInt) -> Option<i128> {
    (x.bits() <= SMALL_LIMIT as u64).then(|| x.to_i128().expect("checked width"))
}

impl JointCounter {
    /// Prepares the level chain for `r` free base-`a` positions and `j` free base-`b` positions.
    pub fn new(a: DigitConstraint, r: u32, b: DigitConstraint, j: u32) -> Self {
        let hull = |c: &DigitConstraint, k: u32| {
            let rep = repunit(c.base(), k);
            (&rep * c.min_digit(), &rep * c.max_digit())
        };
        let size = |c: &DigitConstraint, k: u32| (c.allowed().len() as u128).checked_pow(k);
        let (mut r, mut j) = (r, j);
        let mut levels = Vec::new();
        loop {
            let (tmin, tmax) = hull(&a, r);
            let (smin, smax) = hull(&b, j);
            // x = v + t = u + s, so d = v − u = s − t.
            let lo = &smin - &tmax;
            let hi = &smax - &tmin;
            let table_size = size(&a, r).zip(size(&b, j)).and_then(|(x, y)| x.checked_mul(y));
            let span_ok = |c: &DigitConstraint, k: u32| (c.base() as u64).checked_pow(k).is_some_and(|p| p < 1 << 61);
            if table_size.is_some_and(|n| n <= TABLE_LIMIT) && span_ok(&a, r) && span_ok(&b, j) {
                let (ta, tb) = (completions(&a, r), completions(&b, j));
                let mut table: Vec<i64> = tb.iter().flat_map(|s| ta.iter().map(move |t| s - t)).collect();
                table.sort_unstable();
                levels.push(Level {
                    side: Side::A,
                    pow: BigInt::zero(),
                    small: fits(&lo).zip(fits(&hi)).map(|(lo, hi)| SmallLevel { pow: 0, lo, hi }),
                    lo,
                    hi,
                });
                let small_from = levels.iter().rposition(|l| l.small.is_none()).map_or(0, |i| i + 1);
                return JointCounter {
                    a,
                    b,
                    levels,
                    small_from,
                    table,
                };
            }
            let refine_a = j == 0 || (r > 0 && &tmax - &tmin >= &smax - &smin);
            let (side, pow) = if refine_a {
                r -= 1;
                (Side::A, num_traits::pow(BigInt::from(a.base()), r as usize))
            } else {
                j -= 1;
                (Side::B, num_traits::pow(BigInt::from(b.base()), j as usize))
            };
            let max_step = &pow * a.base().max(b.base());
            let small = fits(&max_step)
                .and(fits(&pow))
                .zip(fits(&lo))
                .zip(fits(&hi))
                .map(|((pow, lo), hi)| SmallLevel { pow, lo, hi });
            levels.push(Level {
                side,
                pow,
                lo,
                hi,
                small,
            });
        }
    }

    /// Number of `x` with `x − v0 ∈ T_a(r)` and `x − u0 ∈ T_b(j)`.
    pub fn count(&self, v0: &Natural, u0: &Natural) -> u64 {
        let d = BigInt::from(v0.clone()) - BigInt::from(u0.clone());
        self.count_big(&d, 0)
    }

    fn in_range(&self, d: &BigInt, k: usize) -> bool {
        let l = &self.levels[k];
        &l.lo <= d && d <= &l.hi
    }

    fn count_big(&self, d: &BigInt, k: usize) -> u64 {
        if !self.in_range(d, k) {
            return 0;
        }
        if k >= self.small_from {
            return self.count_small(d.to_i128().expect("in small range"), k);
        }
        if k + 1 == self.levels.len() {
            return self.lookup(d.to_i64());
        }
        let level = &self.levels[k];
        let digits = match level.side {
            Side::A => self.a.allowed(),
            Side::B => self.b.allowed(),
        };
        digits
            .iter()
            .map(|&dg| {
                let step = &level.pow * dg;
                let next = match level.side {
                    Side::A => d + step,
                    Side::B => d - step,
                };
                self.count_big(&next, k + 1)
            })
            .sum()
    }

    fn count_small(&self, d: i128, k: usize) -> u64 {
        let level = self.levels[k].small.expect("small chain");
        if d < level.lo || d > level.hi {
            return 0;
        }
        if k + 1 == self.levels.len() {
            return self.lookup(i64::try_from(d).ok());
        }
        let mut total = 0;
        match self.levels[k].side {
            Side::A => {
                for &dg in self.a.allowed() {
                    total += self.count_small(d + level.pow * dg as i128, k + 1);
                }
            }
            Side::B => {
                for &dg in self.b.allowed() {
                    total += self.count_small(d - level.pow * dg as i128, k + 1);
                }
            }
        }
        total
    }

    fn lookup(&self, d: Option<i64>) -> u64 {
        let Some(d) = d else { return 0 };
        let lo = self.table.partition_point(|&x| x < d);
        let hi = self.table.partition_point(|&x| x <= d);
        (hi - lo) as u64
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }
}

/// Integers in both `T_a(r)` and `T_b(j)`; when both digit sets contain 0 these
/// are the members of the two-constraint system below `min(a^r, b^j)`.
pub fn joint_count_below(a: &DigitConstraint, r: u32, b: &DigitConstraint, j: u32) -> u64 {
    JointCounter::new(a.clone(), r, b.clone(), j).count(&Natural::zero(), &Natural::zero())
}
