//! Fixed-point interval arithmetic with directed rounding.
//!
//! An [`Interval`] at precision `p` is a pair of integers `lo <= hi` standing
//! for the real interval `[lo / 2^p, hi / 2^p]`. Every operation rounds its
//! lower endpoint down and its upper endpoint up, so the true value of any
//! expression built from these operations lies inside the result.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default working precision in fractional bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Upper limit used by adaptive refinement loops.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Certified enclosure of a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    if b.is_negative() {
        (-a).div_floor(&-b)
    } else {
        a.div_floor(b)
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -floor_div(&-a, b)
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

impl Interval {
    /// The point `v` (exact).
    pub fn from_integer(v: impl Into<BigInt>, prec: u32) -> Self {
        let v: BigInt = v.into() << prec as usize;
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// Outward-rounded enclosure of `num / den`.
    ///
    /// Panics if `den` is zero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = num << prec as usize;
        Interval {
            lo: floor_div(&scaled, den),
            hi: ceil_div(&scaled, den),
            prec,
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(r.numer(), r.denom(), prec)
    }

    /// Hull of two enclosures at the same precision.
    pub fn hull(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.prec + 1))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.prec))
    }

    /// Width as an `f64`, rounded up slightly.
    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&self.width()) * (1.0 + 1e-12)
    }

    pub fn lower_f64(&self) -> f64 {
        rational_to_f64(&self.lower())
    }

    pub fn upper_f64(&self) -> f64 {
        rational_to_f64(&self.upper())
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certainly `self < other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.check(other);
        self.hi < other.lo
    }

    /// Certainly `self <= other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.check(other);
        self.hi <= other.lo
    }

    /// Certified comparison against a rational; `None` if the enclosure straddles it.
    pub fn compare_rational(&self, x: &BigRational) -> Option<Ordering> {
        if self.upper() < *x {
            Some(Ordering::Less)
        } else if self.lower() > *x {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && self.lower() == *x {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// The integer part, if both endpoints share it.
    pub fn floor(&self) -> Option<BigInt> {
        let one = pow2(self.prec);
        let a = floor_div(&self.lo, &one);
        let b = floor_div(&self.hi, &one);
        (a == b).then_some(a)
    }

    /// Re-round to another precision (outward when coarsening).
    pub fn with_precision(&self, prec: u32) -> Interval {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let shift = (prec - self.prec) as usize;
                Interval {
                    lo: &self.lo << shift,
                    hi: &self.hi << shift,
                    prec,
                }
            }
            Ordering::Less => {
                let d = pow2(self.prec - prec);
                Interval {
                    lo: floor_div(&self.lo, &d),
                    hi: ceil_div(&self.hi, &d),
                    prec,
                }
            }
        }
    }

    fn check(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn add_integer(&self, v: &BigInt) -> Interval {
        let s = v << self.prec as usize;
        Interval {
            lo: &self.lo + &s,
            hi: &self.hi + &s,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check(other);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        let scale = pow2(self.prec);
        Interval {
            lo: floor_div(min, &scale),
            hi: ceil_div(max, &scale),
            prec: self.prec,
        }
    }

    /// Exact scaling by an integer.
    pub fn mul_integer(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Division by a nonzero integer.
    pub fn div_integer(&self, k: &BigInt) -> Interval {
        assert!(!k.is_zero(), "division by zero");
        let (a, b) = if k.is_negative() {
            (-&self.hi, -&self.lo)
        } else {
            (self.lo.clone(), self.hi.clone())
        };
        let k = k.abs();
        Interval {
            lo: floor_div(&a, &k),
            hi: ceil_div(&b, &k),
            prec: self.prec,
        }
    }

    /// Multiplication by the exact rational `num / den`.
    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Interval {
        self.mul_integer(num).div_integer(den)
    }

    /// Division; `None` if the divisor's enclosure contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        self.check(other);
        if other.contains_zero() {
            return None;
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let scaled = a << self.prec as usize;
                let f = floor_div(&scaled, b);
                let c = ceil_div(&scaled, b);
                lo = Some(match lo {
                    Some(v) if v <= f => v,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(v) if v >= c => v,
                    _ => c,
                });
            }
        }
        Some(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: self.prec,
        })
    }

    /// Absolute-value bound `max(|lo|, |hi|)` in units of `2^-prec`.
    fn magnitude_units(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }

    fn widen_units(&self, units: &BigInt) -> Interval {
        Interval {
            lo: &self.lo - units,
            hi: &self.hi + units,
            prec: self.prec,
        }
    }

    /// Decimal rendering of the midpoint with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_significant(&self.midpoint(), sig)
    }
}

/// Nearest `f64` to a rational (via a 64-bit significand; adequate for reporting).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let q = if shift >= 0 {
        &num / (&den << shift as usize)
    } else {
        (&num << (-shift) as usize) / &den
    };
    let q: u128 = q.try_into().unwrap_or(u128::MAX);
    let v = q as f64 * libm::exp2(shift as f64);
    if neg {
        -v
    } else {
        v
    }
}

/// Rounds `r` to `sig` significant decimal digits (ties away from zero) and
/// prints it positionally.
pub fn format_significant(r: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let mut e = ((a.numer().bits() as f64 - a.denom().bits() as f64) * core::f64::consts::LOG10_2) as i64;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut q = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if q >= num_traits::pow(ten.clone(), sig) {
        q /= &ten;
        shift -= 1;
    }
    let digits = q.to_str_radix(10);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if shift <= 0 {
        out.push_str(&digits);
        for _ in 0..(-shift) {
            out.push('0');
        }
    } else {
        let shift = shift as usize;
        if digits.len() > shift {
            let (int, frac) = digits.split_at(digits.len() - shift);
            out.push_str(int);
            out.push('.');
            out.push_str(frac);
        } else {
            out.push_str("0.");
            for _ in 0..(shift - digits.len()) {
                out.push('0');
            }
            out.push_str(&digits);
        }
    }
    out
}

/// Enclosure of `atanh(num/den)` for `|num/den| <= 1/2`, by its odd power series.
fn atanh_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Interval {
    debug_assert!(BigInt::from(2) * num.abs() <= den.abs());
    let z2_num = num * num;
    let z2_den = den * den;
    let mut power = Interval::from_ratio(num, den, prec);
    let mut sum = Interval::from_integer(0, prec);
    let mut k: u64 = 0;
    loop {
        sum = sum.add(&power.div_integer(&BigInt::from(2 * k + 1)));
        power = power.mul_ratio(&z2_num, &z2_den);
        k += 1;
        // Remaining terms are bounded by |z|^(2k+1) / (1 - z^2) <= 2 |z|^(2k+1).
        if power.magnitude_units() <= BigInt::one() {
            let tail = power.magnitude_units() * 2 + 1;
            return sum.widen_units(&tail);
        }
    }
}

fn guard_bits(prec: u32) -> u32 {
    32 + (32 - prec.leading_zeros())
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let w = prec + guard_bits(prec);
    atanh_ratio(&BigInt::one(), &BigInt::from(3), w)
        .mul_integer(&BigInt::from(2))
        .with_precision(prec)
}

/// Enclosure of the natural logarithm of a positive rational.
///
/// Panics if `r <= 0`.
pub fn ln_rational(r: &BigRational, prec: u32) -> Interval {
    assert!(r.is_positive(), "logarithm of a nonpositive number");
    if r.is_one() {
        return Interval::from_integer(0, prec);
    }
    let w = prec + guard_bits(prec);
    // r = 2^k * m with m in [2/3, 4/3].
    let mut k = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scale = |k: i64| -> BigRational {
        if k >= 0 {
            r / BigRational::from_integer(BigInt::one() << k as usize)
        } else {
            r * BigRational::from_integer(BigInt::one() << (-k) as usize)
        }
    };
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    let mut m = scale(k);
    while m > four_thirds {
        k += 1;
        m = scale(k);
    }
    while m < two_thirds {
        k -= 1;
        m = scale(k);
    }
    let one = BigRational::one();
    let z = (&m - &one) / (&m + &one);
    let mut out = atanh_ratio(z.numer(), z.denom(), w).mul_integer(&BigInt::from(2));
    if k != 0 {
        let l2 = atanh_ratio(&BigInt::one(), &BigInt::from(3), w).mul_integer(&BigInt::from(2));
        out = out.add(&l2.mul_integer(&BigInt::from(k)));
    }
    out.with_precision(prec)
}

/// Enclosure of `ln n` for a positive integer.
pub fn ln_natural(n: &BigUint, prec: u32) -> Interval {
    ln_rational(
        &BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone())),
        prec,
    )
}

pub fn ln_u64(n: u64, prec: u32) -> Interval {
    ln_natural(&BigUint::from(n), prec)
}

/// Enclosure of `log a / log b` for integers `a >= 1`, `b >= 2`.
pub fn log_ratio(a: u64, b: u64, prec: u32) -> Interval {
    assert!(a >= 1 && b >= 2);
    let w = prec + 16;
    ln_u64(a, w)
        .div(&ln_u64(b, w))
        .expect("log b > 0")
        .with_precision(prec)
}

/// `exp` of the dyadic point `units / 2^prec`.
fn exp_point(units: &BigInt, prec: u32) -> Interval {
    // Halve the argument s times so that |y| <= 1/2, then square back.
    let excess = units.bits() as i64 - prec as i64 + 1;
    let s = excess.max(0) as u32;
    let w = prec + guard_bits(prec) + 2 * s;
    let y = Interval {
        lo: units.clone(),
        hi: units.clone(),
        prec: prec + s,
    }
    .with_precision(w);
    let mut term = Interval::from_integer(1, w);
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = term.mul(&y).div_integer(&BigInt::from(k));
        sum = sum.add(&term);
        k += 1;
        // With |y| <= 1/2 the remainder is at most twice the next term.
        if term.magnitude_units() <= BigInt::one() {
            let tail = term.magnitude_units() * 2 + 1;
            sum = sum.widen_units(&tail);
            break;
        }
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum.with_precision(prec)
}

/// Enclosure of `exp(x)`.
pub fn exp(x: &Interval) -> Interval {
    let lo = exp_point(&x.lo, x.prec);
    let hi = exp_point(&x.hi, x.prec);
    Interval {
        lo: lo.lo,
        hi: hi.hi,
        prec: x.prec,
    }
}

/// Sum of a sequence of enclosures at one precision.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a Interval>, prec: u32) -> Interval {
    items
        .into_iter()
        .fold(Interval::from_integer(0, prec), |acc, x| acc.add(x))
}

/// Runs `f` at doubling precision starting from `start` until `accept` holds or `cap` is passed.
/// Returns the last value computed and whether it was accepted.
pub fn refine<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> T,
    mut accept: impl FnMut(&T) -> bool,
) -> (T, bool) {
    let mut prec = start.max(16);
    loop {
        let v = f(prec);
        if accept(&v) {
            return (v, true);
        }
        if prec >= cap {
            return (v, false);
        }
        prec = (prec * 2).min(cap);
    }
}

/// Enclosures of `ln` for a batch of integers at one precision.
pub fn ln_table(values: &[u64], prec: u32) -> Vec<Interval> {
    values.iter().map(|&v| ln_u64(v, prec)).collect()
}
