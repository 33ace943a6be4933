//! Exact-rational covers of restricted-digit Cantor sets and the slopes of
//! lines through the origin that miss a product of two such covers.
//!
//! All set operations run on exact rationals. A cover is a union of convex
//! hulls, one per allowed digit prefix, so it always contains the underlying
//! Cantor set; slopes avoided by a product of covers are therefore avoided by
//! the product of the sets themselves.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::{self, Interval};
use crate::numeral::DigitConstraint;
use crate::{Error, Result};

pub type Rational = BigRational;

/// Largest number of components any cover or slope set may reach.
pub const COMPONENT_LIMIT: u128 = 10_000_000;

/// `n / d` as a rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sorted, disjoint, merged union of closed intervals with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    parts: Vec<(Rational, Rational)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        IntervalUnion::from_intervals([(lo, hi)])
    }

    /// Normalizes arbitrary closed intervals: sorts, drops empty ones and merges
    /// any that overlap or touch.
    pub fn from_intervals(items: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut items: Vec<_> = items.into_iter().filter(|(a, b)| a <= b).collect();
        items.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        IntervalUnion {
            parts: merge_sorted(items),
        }
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.parts.partition_point(|(a, _)| a <= x);
        idx > 0 && x <= &self.parts[idx - 1].1
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersect_interval(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        let parts = self
            .parts
            .iter()
            .filter_map(|(a, b)| {
                let a = a.max(lo).clone();
                let b = b.min(hi).clone();
                (a <= b).then_some((a, b))
            })
            .collect();
        IntervalUnion { parts }
    }

    /// Image under `x -> k x` for `k > 0`.
    pub fn scale(&self, k: &Rational) -> IntervalUnion {
        assert!(k.is_positive(), "scale factor must be positive");
        IntervalUnion {
            parts: self.parts.iter().map(|(a, b)| (a * k, b * k)).collect(),
        }
    }

    /// Total length.
    pub fn length(&self) -> Rational {
        self.parts
            .iter()
            .fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_union(&self, other: &IntervalUnion) -> bool {
        other.parts.iter().all(|(a, b)| {
            let idx = self.parts.partition_point(|(c, _)| c <= a);
            idx > 0 && b <= &self.parts[idx - 1].1
        })
    }
}

fn merge_sorted(items: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(items.len());
    for (a, b) in items {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Union of open intervals of slopes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlopeWindows {
    parts: Vec<(Rational, Rational)>,
}

impl SlopeWindows {
    /// Open windows `(a, b)`; pairs with `a >= b` are dropped.
    pub fn new(items: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut items: Vec<_> = items.into_iter().filter(|(a, b)| a < b).collect();
        items.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(items.len());
        for (a, b) in items {
            match out.last_mut() {
                // Open intervals sharing only an endpoint stay separate.
                Some(last) if a < last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        SlopeWindows { parts: out }
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Strict membership; window endpoints are not avoided.
    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.parts.partition_point(|(a, _)| a < x);
        idx > 0 && x < &self.parts[idx - 1].1
    }

    /// Whether every window of `other` lies inside a window of `self`.
    pub fn covers(&self, other: &SlopeWindows) -> bool {
        other.parts.iter().all(|(a, b)| {
            let idx = self.parts.partition_point(|(c, _)| c <= a);
            idx > 0 && b <= &self.parts[idx - 1].1
        })
    }

    /// The windows of the main theorem, `(3/2, 9/4) ∪ (9/2, 27/4)`.
    pub fn block_depth_zero() -> Self {
        SlopeWindows::new([(ratio(3, 2), ratio(9, 4)), (ratio(9, 2), ratio(27, 4))])
    }
}

/// A finite-depth cover `scale · A ∩ window`, with `A ⊂ [0,1]` the reals whose
/// expansion uses only the allowed digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub digits: DigitConstraint,
    /// Digit positions of `A` resolved. When `scale = base^j` the first `j`
    /// positions are integer digits of the scaled set.
    pub depth: u32,
    pub window: (Rational, Rational),
    pub scale: Rational,
}

impl CoverSpec {
    pub fn new(digits: DigitConstraint, depth: u32, window: (Rational, Rational), scale: Rational) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::InvalidWindow(alloc::format!("[{}, {}]", window.0, window.1)));
        }
        if !scale.is_positive() {
            return Err(Error::InvalidWindow(alloc::format!("scale {scale} must be positive")));
        }
        Ok(CoverSpec {
            digits,
            depth,
            window,
            scale,
        })
    }
}

/// Union of the hulls of all allowed digit prefixes of length `depth`, scaled and
/// clipped to the window.
pub fn restricted_cover(spec: &CoverSpec) -> Result<IntervalUnion> {
    let base = spec.digits.base() as u64;
    let allowed = spec.digits.allowed();
    let count = (allowed.len() as u128).checked_pow(spec.depth).unwrap_or(u128::MAX);
    if count > COMPONENT_LIMIT {
        return Err(Error::TooManyComponents {
            count,
            limit: COMPONENT_LIMIT,
        });
    }
    // Prefix value V / base^depth; hull offsets min/(base-1) and max/(base-1)
    // in units of base^-depth.
    let denom = num_traits::pow(BigInt::from(base), spec.depth as usize) * BigInt::from(base - 1);
    let lo_off = BigInt::from(spec.digits.min_digit());
    let hi_off = BigInt::from(spec.digits.max_digit());
    let bm1 = BigInt::from(base - 1);

    let mut values = alloc::vec![BigInt::zero()];
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(values.len() * allowed.len());
        for v in &values {
            for &d in allowed {
                next.push(v * BigInt::from(base) + BigInt::from(d));
            }
        }
        values = next;
    }
    let (wlo, whi) = &spec.window;
    let mut parts = Vec::with_capacity(values.len());
    for v in values {
        let a = Rational::new(&v * &bm1 + &lo_off, denom.clone()) * &spec.scale;
        let b = Rational::new(&v * &bm1 + &hi_off, denom.clone()) * &spec.scale;
        let a = if &a < wlo { wlo.clone() } else { a };
        let b = if &b > whi { whi.clone() } else { b };
        if a <= b {
            parts.push((a, b));
        }
    }
    Ok(IntervalUnion {
        parts: merge_sorted(parts),
    })
}

/// Slopes `σ` for which the line `y = σx` meets `X × Y`.
pub fn hit_slopes(x: &IntervalUnion, y: &IntervalUnion) -> Result<IntervalUnion> {
    if x.parts.iter().any(|(a, _)| !a.is_positive()) {
        return Err(Error::InvalidDomain);
    }
    let count = x.len() as u128 * y.len() as u128;
    if count > COMPONENT_LIMIT {
        return Err(Error::TooManyComponents {
            count,
            limit: COMPONENT_LIMIT,
        });
    }
    let mut items = Vec::with_capacity(count as usize);
    for (a, b) in &x.parts {
        for (c, d) in &y.parts {
            let lo = if c.is_negative() { c / a } else { c / b };
            let hi = if d.is_negative() { d / b } else { d / a };
            items.push((lo, hi));
        }
    }
    Ok(IntervalUnion::from_intervals(items))
}

/// `range` minus the hit slopes, reported as open windows.
pub fn avoided_slope_windows(
    x: &IntervalUnion,
    y: &IntervalUnion,
    range: &(Rational, Rational),
) -> Result<SlopeWindows> {
    let (lo, hi) = range;
    if !lo.is_positive() || lo >= hi {
        return Err(Error::InvalidWindow(alloc::format!("slope range [{lo}, {hi}]")));
    }
    let hits = hit_slopes(x, y)?;
    Ok(complement_open(&hits, lo, hi))
}

fn complement_open(hits: &IntervalUnion, lo: &Rational, hi: &Rational) -> SlopeWindows {
    let mut gaps = Vec::new();
    let mut cursor = lo.clone();
    for (a, b) in &hits.parts {
        if b < lo {
            continue;
        }
        if a >= hi {
            break;
        }
        if a > &cursor {
            gaps.push((cursor.clone(), a.clone()));
        }
        if b > &cursor {
            cursor = b.clone();
        }
    }
    if &cursor < hi {
        gaps.push((cursor, hi.clone()));
    }
    SlopeWindows::new(gaps)
}

/// Certified `Σ (ln b − ln a) / ln base` over the windows.
pub fn window_log_measure(w: &SlopeWindows, base: u64, prec: u32) -> Result<Interval> {
    let top = int(base as i64);
    let one = Rational::one();
    for (a, b) in &w.parts {
        if a < &one || b > &top {
            return Err(Error::InvalidWindow(alloc::format!("({a}, {b}) not within [1, {base}]")));
        }
    }
    let wp = prec + 16;
    let total = w
        .parts
        .iter()
        .map(|(a, b)| certified::ln_rational(&(b / a), wp))
        .fold(Interval::from_integer(0, wp), |acc, x| acc.add(&x));
    let measure = total
        .div(&certified::ln_u64(base, wp))
        .expect("ln base > 0");
    Ok(measure.with_precision(prec))
}

/// Cover of the first coordinate of a block: `k / 4^n` for base-4 binary-digit
/// `k ∈ [4^n, 4^(n+1))`, with `extra` fractional digits resolved.
pub fn block_x_cover(extra: u32) -> Result<IntervalUnion> {
    let spec = CoverSpec::new(DigitConstraint::binary(4)?, 1 + extra, (int(1), int(4)), int(4))?;
    restricted_cover(&spec)
}

/// Cover of the second coordinate of a block: base-3 binary-digit values in
/// `[1, 27]` with three integer digits and `extra` fractional digits resolved.
pub fn block_y_cover(extra: u32) -> Result<IntervalUnion> {
    let spec = CoverSpec::new(DigitConstraint::binary(3)?, 3 + extra, (int(1), int(27)), int(27))?;
    restricted_cover(&spec)
}

/// Avoided windows and their certified log-measure at the given fractional depths.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub depth_x: u32,
    pub depth_y: u32,
    pub windows: SlopeWindows,
    pub measure: Interval,
}

pub fn refine_to_depth(depth_x: u32, depth_y: u32, range: &(Rational, Rational)) -> Result<Refinement> {
    let x = block_x_cover(depth_x)?;
    let y = block_y_cover(depth_y)?;
    let windows = avoided_slope_windows(&x, &y, range)?;
    let measure = window_log_measure(&windows, 9, certified::DEFAULT_PRECISION)?;
    Ok(Refinement {
        depth_x,
        depth_y,
        windows,
        measure,
    })
}

/// The slope range `[1, 9]` swept by block slopes.
pub fn block_slope_range() -> (Rational, Rational) {
    (int(1), int(9))
}

/// Renders `n/d` for CSV.
pub fn rational_parts(r: &Rational) -> (String, String) {
    (r.numer().to_str_radix(10), r.denom().to_str_radix(10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn union(items: &[(i64, i64, i64, i64)]) -> IntervalUnion {
        IntervalUnion::from_intervals(items.iter().map(|&(a, b, c, d)| (ratio(a, b), ratio(c, d))))
    }

    #[test]
    fn unit_cover_depth_two() {
        let spec = CoverSpec::new(DigitConstraint::binary(3).unwrap(), 2, (int(0), int(1)), int(1)).unwrap();
        let c = restricted_cover(&spec).unwrap();
        assert_eq!(c, union(&[(0, 1, 1, 18), (1, 9, 1, 6), (1, 3, 7, 18), (4, 9, 1, 2)]));
        // Whole ternary cells of the same prefixes are a coarser cover.
        assert!(union(&[(0, 1, 2, 9), (1, 3, 5, 9)]).contains_union(&c));
    }

    #[test]
    fn integer_cover_of_base_three() {
        let y = block_y_cover(0).unwrap();
        let expect = union(&[
            (1, 1, 3, 2),
            (3, 1, 7, 2),
            (4, 1, 9, 2),
            (9, 1, 19, 2),
            (10, 1, 21, 2),
            (12, 1, 25, 2),
            (13, 1, 27, 2),
        ]);
        assert_eq!(y, expect);
        assert_eq!(block_x_cover(0).unwrap(), union(&[(1, 1, 4, 3)]));
        assert_eq!(block_x_cover(1).unwrap(), union(&[(1, 1, 13, 12), (5, 4, 4, 3)]));
    }

    #[test]
    fn hit_slopes_examples() {
        let sq = union(&[(1, 1, 2, 1)]);
        assert_eq!(hit_slopes(&sq, &sq).unwrap(), union(&[(1, 2, 2, 1)]));
        let h = hit_slopes(&block_x_cover(0).unwrap(), &block_y_cover(0).unwrap()).unwrap();
        assert_eq!(h, union(&[(3, 4, 3, 2), (9, 4, 9, 2), (27, 4, 27, 2)]));
        let zero = union(&[(0, 1, 1, 1)]);
        assert_eq!(hit_slopes(&zero, &sq), Err(Error::InvalidDomain));
    }

    #[test]
    fn theorem_windows() {
        let r = refine_to_depth(0, 0, &block_slope_range()).unwrap();
        assert_eq!(r.windows, SlopeWindows::block_depth_zero());
        let target = 2.25f64.ln() / 9f64.ln();
        assert!((r.measure.midpoint_f64() - target).abs() < 1e-12);
        assert!(r.measure.width_f64() < 1e-9);
    }

    #[test]
    fn covering_range_leaves_nothing() {
        let x = union(&[(1, 1, 1, 1)]);
        let y = union(&[(1, 1, 9, 1)]);
        let w = avoided_slope_windows(&x, &y, &(int(1), int(9))).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn open_window_membership() {
        let w = SlopeWindows::block_depth_zero();
        assert!(!w.contains(&ratio(3, 2)));
        assert!(w.contains(&ratio(2, 1)));
        assert!(!w.contains(&ratio(9, 4)));
        assert!(w.contains(&ratio(5, 1)));
        assert!(!w.contains(&ratio(7, 1)));
    }

    #[test]
    fn measure_of_full_range_is_one() {
        let w = SlopeWindows::new(vec![(int(1), int(9))]);
        let m = window_log_measure(&w, 9, 128).unwrap();
        assert!(m.contains(&int(1)));
        let bad = SlopeWindows::new(vec![(ratio(1, 2), int(2))]);
        assert!(window_log_measure(&bad, 9, 128).is_err());
    }

    #[test]
    fn component_guard() {
        let spec = CoverSpec::new(DigitConstraint::binary(3).unwrap(), 30, (int(0), int(1)), int(1)).unwrap();
        assert!(matches!(restricted_cover(&spec), Err(Error::TooManyComponents { .. })));
    }

    #[test]
    fn union_operations() {
        let a = union(&[(0, 1, 1, 1), (2, 1, 3, 1)]);
        let b = union(&[(1, 1, 2, 1)]);
        assert_eq!(a.union(&b), union(&[(0, 1, 3, 1)]));
        assert!(a.contains(&ratio(5, 2)));
        assert!(!a.contains(&ratio(3, 2)));
        assert_eq!(a.intersect_interval(&ratio(1, 2), &ratio(5, 2)), union(&[(1, 2, 1, 1), (2, 1, 5, 2)]));
        assert_eq!(a.length(), int(2));
        assert!(a.union(&b).contains_union(&a));
    }
}
