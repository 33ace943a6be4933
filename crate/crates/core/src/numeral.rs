//! Positional digit algebra over arbitrary-precision naturals.
//!
//! Digits are stored least-significant first; textual forms are printed
//! most-significant first. Zero is the empty digit sequence.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Unbounded nonnegative integer.
pub type Natural = BigUint;

/// Positional expansion of a [`Natural`] in a single base, least-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    /// Builds a canonical vector, validating every digit and stripping
    /// most-significant zeros.
    pub fn new(base: u32, mut digits: Vec<u32>) -> Result<Self> {
        check_base(base, 2)?;
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitVector { base, digits })
    }

    /// Parses a most-significant-first string of digits (`0-9a-z` for bases up to 36).
    pub fn parse_msb(base: u32, text: &str) -> Result<Self> {
        check_base(base, 2)?;
        let mut digits = Vec::with_capacity(text.len());
        for ch in text.chars().rev() {
            let digit = ch.to_digit(36).ok_or(Error::InvalidDigit {
                digit: u32::MAX,
                base,
            })?;
            digits.push(digit);
        }
        DigitVector::new(base, digits)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Least-significant-first digits.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digits of `0..base` that do not occur in the expansion.
    pub fn missing_digits(&self) -> Vec<u32> {
        let mut seen = vec![false; self.base as usize];
        for &d in &self.digits {
            seen[d as usize] = true;
        }
        (0..self.base).filter(|&d| !seen[d as usize]).collect()
    }
}

impl fmt::Display for DigitVector {
    /// Most-significant-first. Bases up to 36 use `0-9a-z`; larger bases print
    /// colon-separated decimal digits. Zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        if self.base <= 36 {
            for &d in self.digits.iter().rev() {
                let ch = char::from_digit(d, 36).unwrap_or('?');
                fmt::Write::write_char(f, ch)?;
            }
            Ok(())
        } else {
            let mut first = true;
            for &d in self.digits.iter().rev() {
                if !first {
                    f.write_str(":")?;
                }
                first = false;
                write!(f, "{d}")?;
            }
            Ok(())
        }
    }
}

/// Allowed-digit set for one base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitConstraint {
    base: u32,
    allowed: Vec<u32>,
    mask: Vec<bool>,
}

impl DigitConstraint {
    pub fn new(base: u32, allowed: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_base(base, 2)?;
        let mut allowed: Vec<u32> = allowed.into_iter().collect();
        allowed.sort_unstable();
        allowed.dedup();
        if allowed.is_empty() {
            return Err(Error::InvalidConstraint(alloc::format!(
                "base {base}: allowed digit set is empty"
            )));
        }
        if let Some(&digit) = allowed.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        let mut mask = vec![false; base as usize];
        for &d in &allowed {
            mask[d as usize] = true;
        }
        Ok(DigitConstraint {
            base,
            allowed,
            mask,
        })
    }

    /// Digits `{0, 1}`.
    pub fn binary(base: u32) -> Result<Self> {
        DigitConstraint::new(base, [0, 1])
    }

    /// Digits `{0, ..., max}`.
    pub fn bounded(base: u32, max: u32) -> Result<Self> {
        DigitConstraint::new(base, 0..=max)
    }

    /// Every digit except `missing`.
    pub fn without(base: u32, missing: u32) -> Result<Self> {
        DigitConstraint::new(base, (0..base).filter(|&d| d != missing))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Allowed digits in increasing order.
    pub fn allowed(&self) -> &[u32] {
        &self.allowed
    }

    #[inline]
    pub fn allows(&self, digit: u32) -> bool {
        self.mask.get(digit as usize).copied().unwrap_or(false)
    }

    pub fn min_digit(&self) -> u32 {
        self.allowed[0]
    }

    pub fn max_digit(&self) -> u32 {
        self.allowed[self.allowed.len() - 1]
    }

    /// Smallest allowed digit strictly greater than `digit`.
    pub fn next_allowed_above(&self, digit: u32) -> Option<u32> {
        self.allowed.iter().copied().find(|&d| d > digit)
    }

    /// Compact `base:d,d,...` form, also accepted by [`core::str::FromStr`].
    pub fn to_spec_string(&self) -> String {
        let mut out = alloc::format!("{}:", self.base);
        for (i, d) in self.allowed.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&alloc::format!("{d}"));
        }
        out
    }
}

impl core::str::FromStr for DigitConstraint {
    type Err = Error;

    /// Parses `base:d,d,...`; digit ranges `a-b` are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConstraint(alloc::format!("cannot parse {s:?}; expected base:d,d,..."));
        let (base, digits) = s.split_once(':').ok_or_else(bad)?;
        let base: u32 = base.trim().parse().map_err(|_| bad())?;
        let mut allowed = Vec::new();
        for part in digits.split(',') {
            let part = part.trim();
            if let Some((a, b)) = part.split_once('-') {
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                allowed.extend(a..=b);
            } else {
                allowed.push(part.parse().map_err(|_| bad())?);
            }
        }
        DigitConstraint::new(base, allowed)
    }
}

/// A nonempty family of digit constraints with pairwise distinct bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    constraints: Vec<DigitConstraint>,
}

impl ConstraintSystem {
    pub fn new(constraints: Vec<DigitConstraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidConstraint("constraint system is empty".into()));
        }
        for (i, a) in constraints.iter().enumerate() {
            if constraints[..i].iter().any(|b| b.base == a.base) {
                return Err(Error::InvalidConstraint(alloc::format!(
                    "base {} appears twice",
                    a.base
                )));
            }
        }
        Ok(ConstraintSystem { constraints })
    }

    /// Binary digits `{0,1}` in each of the given bases.
    pub fn binary(bases: &[u32]) -> Result<Self> {
        let constraints = bases
            .iter()
            .map(|&b| DigitConstraint::binary(b))
            .collect::<Result<Vec<_>>>()?;
        ConstraintSystem::new(constraints)
    }

    pub fn constraints(&self) -> &[DigitConstraint] {
        &self.constraints
    }

    pub fn bases(&self) -> Vec<u32> {
        self.constraints.iter().map(|c| c.base).collect()
    }

    pub fn admits(&self, n: &Natural) -> bool {
        self.constraints.iter().all(|c| satisfies(n, c))
    }

    /// Pairs of bases that are powers of a common integer, so that
    /// `log p / log q` is rational. No further independence is checked.
    pub fn dependent_base_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (i, a) in self.constraints.iter().enumerate() {
            for b in &self.constraints[i + 1..] {
                if multiplicatively_dependent(a.base as u64, b.base as u64) {
                    out.push((a.base, b.base));
                }
            }
        }
        out
    }
}

pub(crate) fn check_base(base: u32, min: u32) -> Result<()> {
    if base < min {
        Err(Error::InvalidBase { base, min })
    } else {
        Ok(())
    }
}

/// Expansion of `n` in `base`.
pub fn to_digits(n: &Natural, base: u32) -> Result<DigitVector> {
    check_base(base, 2)?;
    Ok(DigitVector {
        base,
        digits: raw_digits(n, base),
    })
}

/// Least-significant-first digits; `base >= 2` is the caller's obligation.
pub(crate) fn raw_digits(n: &Natural, base: u32) -> Vec<u32> {
    let mut out = Vec::new();
    if let Some(mut v) = n.to_u128() {
        let b = base as u128;
        while v > 0 {
            out.push((v % b) as u32);
            v /= b;
        }
        return out;
    }
    // Peel off chunks of `per_chunk` digits by dividing by base^per_chunk.
    let b = base as u64;
    let mut chunk = b;
    let mut per_chunk = 1;
    while let Some(next) = chunk.checked_mul(b) {
        chunk = next;
        per_chunk += 1;
    }
    let divisor = BigUint::from(chunk);
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&divisor);
        let mut r = r.to_u64().unwrap_or(0);
        if q.is_zero() {
            while r > 0 {
                out.push((r % b) as u32);
                r /= b;
            }
        } else {
            for _ in 0..per_chunk {
                out.push((r % b) as u32);
                r /= b;
            }
        }
        rest = q;
    }
    out
}

/// Value of a digit vector.
pub fn from_digits(d: &DigitVector) -> Result<Natural> {
    from_raw_digits(d.base, &d.digits)
}

/// Value of least-significant-first `digits` in `base`, validating each digit.
pub fn from_raw_digits(base: u32, digits: &[u32]) -> Result<Natural> {
    check_base(base, 2)?;
    if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
        return Err(Error::InvalidDigit { digit, base });
    }
    Ok(horner(base, digits))
}

pub(crate) fn horner(base: u32, digits: &[u32]) -> Natural {
    // Fast path while the value fits in 128 bits.
    let mut acc: u128 = 0;
    let b = base as u128;
    let mut i = digits.len();
    while i > 0 {
        match acc.checked_mul(b).and_then(|v| v.checked_add(digits[i - 1] as u128)) {
            Some(v) => {
                acc = v;
                i -= 1;
            }
            None => break,
        }
    }
    let mut big = BigUint::from(acc);
    while i > 0 {
        big = big * base + digits[i - 1];
        i -= 1;
    }
    big
}

/// Whether every digit of `n` in the constraint's base is allowed.
pub fn satisfies(n: &Natural, c: &DigitConstraint) -> bool {
    if let Some(mut v) = n.to_u128() {
        let b = c.base as u128;
        while v > 0 {
            if !c.mask[(v % b) as usize] {
                return false;
            }
            v /= b;
        }
        return true;
    }
    raw_digits(n, c.base).iter().all(|&d| c.allows(d))
}

/// Whether some digit of `0..base` is absent from the expansion of `n`.
pub fn misses_some_digit(n: &Natural, base: u32) -> Result<bool> {
    check_base(base, 3)?;
    Ok(misses_digit_raw(&raw_digits(n, base), base))
}

pub(crate) fn misses_digit_raw(digits: &[u32], base: u32) -> bool {
    if digits.len() < base as usize {
        return true;
    }
    let mut seen = vec![false; base as usize];
    let mut distinct = 0;
    for &d in digits {
        if !seen[d as usize] {
            seen[d as usize] = true;
            distinct += 1;
            if distinct == base {
                return false;
            }
        }
    }
    true
}

/// Same as [`misses_some_digit`] for machine integers.
pub fn misses_some_digit_u64(mut n: u64, base: u32) -> bool {
    let b = base as u64;
    // 64 digits suffice for any base handled through a u64 bitmask.
    if base > 64 {
        return misses_some_digit(&BigUint::from(n), base).unwrap_or(true);
    }
    let full: u64 = if base == 64 { u64::MAX } else { (1u64 << base) - 1 };
    let mut seen = 0u64;
    while n > 0 {
        seen |= 1 << (n % b);
        n /= b;
    }
    seen != full
}

/// Kummer: `p` does not divide `C(2n, n)` iff every base-`p` digit of `n` is at most `(p-1)/2`.
pub fn kummer_coprime(n: &Natural, p: u32) -> Result<bool> {
    check_odd_prime(p as u64)?;
    let half = (p - 1) / 2;
    Ok(raw_digits(n, p).iter().all(|&d| d <= half))
}

/// Carries in the base-`p` addition `n + n`; equals the `p`-adic valuation of `C(2n, n)`.
pub fn carry_count(n: &Natural, p: u32) -> Result<u64> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidPrime { value: p as u64 });
    }
    let mut carry = 0u32;
    let mut count = 0u64;
    for d in raw_digits(n, p) {
        let s = 2 * d + carry;
        carry = u32::from(s >= p);
        count += carry as u64;
    }
    Ok(count)
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime { value: p })
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes below `limit`, by sieve.
pub fn odd_primes_below(limit: usize) -> Vec<u64> {
    if limit < 4 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    let mut i = 3;
    while i < limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Smallest `r` with `n = r^k` for some `k >= 1`.
pub fn primitive_root(n: u64) -> u64 {
    if n < 4 {
        return n;
    }
    let mut best = n;
    for k in 2..64u32 {
        let r = integer_root(n, k);
        if r < 2 {
            break;
        }
        if r.checked_pow(k) == Some(n) {
            best = best.min(primitive_root(r));
        }
    }
    best
}

fn integer_root(n: u64, k: u32) -> u64 {
    let mut r = libm::pow(n as f64, 1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// True when `log p / log q` is rational, i.e. both are powers of one integer.
pub fn multiplicatively_dependent(p: u64, q: u64) -> bool {
    p >= 2 && q >= 2 && primitive_root(p) == primitive_root(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn expansions_of_82000() {
        let d3 = to_digits(&nat(82000), 3).unwrap();
        assert_eq!(d3.to_string(), "11011111001");
        let d5 = to_digits(&nat(82000), 5).unwrap();
        assert_eq!(d5.to_string(), "10111000");
        let d4 = DigitVector::parse_msb(4, "110001100").unwrap();
        assert_eq!(from_digits(&d4).unwrap(), nat(82000));
    }

    #[test]
    fn zero_is_empty() {
        assert!(to_digits(&nat(0), 3).unwrap().is_empty());
        assert_eq!(from_digits(&DigitVector::new(4, vec![]).unwrap()).unwrap(), nat(0));
        assert_eq!(from_digits(&DigitVector::parse_msb(7, "10").unwrap()).unwrap(), nat(7));
        for b in 3..10 {
            assert!(misses_some_digit(&nat(0), b).unwrap());
        }
    }

    #[test]
    fn base_and_digit_errors() {
        assert_eq!(
            to_digits(&nat(5), 1),
            Err(Error::InvalidBase { base: 1, min: 2 })
        );
        assert_eq!(
            from_raw_digits(3, &[0, 3]),
            Err(Error::InvalidDigit { digit: 3, base: 3 })
        );
        assert!(misses_some_digit(&nat(5), 2).is_err());
        assert!(DigitConstraint::new(3, []).is_err());
        assert!(DigitConstraint::new(3, [0, 3]).is_err());
        assert_eq!(kummer_coprime(&nat(1), 9), Err(Error::InvalidPrime { value: 9 }));
        assert!(kummer_coprime(&nat(1), 2).is_err());
        assert!(carry_count(&nat(1), 4).is_err());
    }

    #[test]
    fn canonical_vectors_drop_leading_zeros() {
        let d = DigitVector::new(10, vec![3, 0, 0]).unwrap();
        assert_eq!(d.digits(), &[3]);
    }

    #[test]
    fn satisfies_examples() {
        let b4 = DigitConstraint::binary(4).unwrap();
        let b3 = DigitConstraint::binary(3).unwrap();
        let b5 = DigitConstraint::binary(5).unwrap();
        assert!(satisfies(&nat(5), &b4));
        assert!(!satisfies(&nat(2), &b3));
        assert!(satisfies(&nat(82000), &b5));
    }

    #[test]
    fn misses_examples() {
        assert!(misses_some_digit(&nat(5), 3).unwrap());
        assert!(misses_some_digit(&nat(2), 3).unwrap());
        assert!(!misses_some_digit(&nat(21), 3).unwrap());
        assert!(!misses_some_digit_u64(21, 3));
    }

    #[test]
    fn kummer_examples() {
        assert!(kummer_coprime(&nat(1), 3).unwrap());
        assert!(!kummer_coprime(&nat(2), 3).unwrap());
        for p in [3, 5, 7, 11] {
            assert!(kummer_coprime(&nat(3160), p).unwrap());
        }
        assert_eq!(carry_count(&nat(2), 3).unwrap(), 1);
        assert_eq!(carry_count(&nat(1), 5).unwrap(), 0);
    }

    #[test]
    fn big_values_round_trip() {
        let n: Natural = Natural::from(3u32).pow(200) + 12345u32;
        for b in [2, 3, 7, 10, 36, 1000, 65536] {
            let d = to_digits(&n, b).unwrap();
            assert_eq!(from_digits(&d).unwrap(), n);
            assert_ne!(d.digits().last(), Some(&0));
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
        assert_eq!(&odd_primes_below(30)[..], &[3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn dependence_of_bases() {
        assert!(multiplicatively_dependent(4, 8));
        assert!(multiplicatively_dependent(9, 27));
        assert!(!multiplicatively_dependent(3, 4));
        assert!(!multiplicatively_dependent(6, 36 * 6 + 1));
        let sys = ConstraintSystem::binary(&[3, 4, 9]).unwrap();
        assert_eq!(sys.dependent_base_pairs(), vec![(3, 9)]);
        assert!(ConstraintSystem::binary(&[3, 3]).is_err());
    }

    #[test]
    fn parse_constraint() {
        let c: DigitConstraint = "4:0,1".parse().unwrap();
        assert_eq!(c.allowed(), &[0, 1]);
        let c: DigitConstraint = "7:0-3".parse().unwrap();
        assert_eq!(c.allowed(), &[0, 1, 2, 3]);
        assert_eq!(c.to_spec_string(), "7:0,1,2,3");
        assert!("7".parse::<DigitConstraint>().is_err());
    }
}
