//! Central binomial coefficients `C(2n, n)` coprime to a product of odd primes.
//!
//! By Kummer's criterion `p ∤ C(2n, n)` exactly when every base-`p` digit of `n`
//! is at most `(p-1)/2`, so the admissible `n` form a restricted-digit system
//! and are counted with the pruned search.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::numeral::{self, ConstraintSystem, DigitConstraint, Natural};
use crate::search::{self, SearchSpec};
use crate::{Error, Result};

/// A sorted list of distinct odd primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimalitySpec {
    primes: Vec<u32>,
}

impl CoprimalitySpec {
    pub fn new(primes: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut primes: Vec<u32> = primes.into_iter().collect();
        if primes.is_empty() {
            return Err(Error::InvalidConstraint("prime list is empty".into()));
        }
        for &p in &primes {
            numeral::check_odd_prime(p as u64)?;
        }
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConstraint("duplicate prime".into()));
        }
        Ok(CoprimalitySpec { primes })
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Product of the primes.
    pub fn modulus(&self) -> Natural {
        self.primes.iter().fold(Natural::one(), |acc, &p| acc * p)
    }

    /// Base `p` with digits `{0, ..., (p-1)/2}` for every prime.
    pub fn system(&self) -> ConstraintSystem {
        let cs = self
            .primes
            .iter()
            .map(|&p| DigitConstraint::bounded(p, (p - 1) / 2).expect("odd prime base"))
            .collect();
        ConstraintSystem::new(cs).expect("distinct bases")
    }

    /// Search over `[lo, hi)` with the largest prime as generator.
    pub fn search_spec(&self, lo: Natural, hi: Natural) -> Result<SearchSpec> {
        let largest = *self.primes.last().expect("nonempty");
        SearchSpec::from_system_with_generator(&self.system(), largest, lo, hi)
    }
}

/// Whether `C(2n, n)` is coprime to every prime of the spec.
pub fn is_coprime_record(n: &Natural, spec: &CoprimalitySpec) -> bool {
    spec.primes.iter().all(|&p| {
        let half = (p - 1) / 2;
        numeral::satisfies(n, &DigitConstraint::bounded(p, half).expect("odd prime base"))
    })
}

/// `G(N)`: positive `n <= N` with `C(2n, n)` coprime to the given primes.
pub fn g_count(n_max: &Natural, spec: &CoprimalitySpec) -> u64 {
    if n_max.is_zero() {
        return 0;
    }
    let s = spec
        .search_spec(Natural::one(), n_max + 1u32)
        .expect("nonempty range");
    search::count_members(&s)
}

/// `ln G(N) / ln N`; `None` when `N <= 1` or the count is zero.
pub fn g_exponent(n_max: &Natural, spec: &CoprimalitySpec) -> Option<f64> {
    let count = g_count(n_max, spec);
    exponent(n_max, count)
}

/// `ln count / ln N` for `N >= 2`.
pub fn exponent(n_max: &Natural, count: u64) -> Option<f64> {
    if count == 0 || n_max <= &Natural::one() {
        return None;
    }
    Some(libm::log(count as f64) / ln_natural_f64(n_max))
}

pub(crate) fn ln_natural_f64(n: &Natural) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY);
        libm::log(v)
    } else {
        let shift = bits - 64;
        let top: f64 = num_traits::ToPrimitive::to_f64(&(n >> shift as usize)).unwrap_or(0.0);
        libm::log(top) + shift as f64 * core::f64::consts::LN_2
    }
}

/// Members in `[0, N]` in increasing order; 0 is reported as a member but
/// not counted by [`g_count`].
pub fn members(n_max: &Natural, spec: &CoprimalitySpec) -> Vec<Natural> {
    let s = spec
        .search_spec(Natural::zero(), n_max + 1u32)
        .expect("nonempty range");
    search::enumerate_members(&s).collect()
}

/// `v_p(m!)` by Legendre's formula.
pub fn factorial_valuation(m: &Natural, p: u32) -> u64 {
    let mut total = 0u64;
    let mut q = m / p;
    while !q.is_zero() {
        total += u64::try_from(&q).unwrap_or(u64::MAX);
        q /= p;
    }
    total
}

/// `v_p(C(2n, n)) = v_p((2n)!) − 2 v_p(n!)`, independent of digit arithmetic.
pub fn valuation_oracle(n: &Natural, p: u32) -> Result<u64> {
    if !numeral::is_prime(p as u64) {
        return Err(Error::InvalidPrime { value: p as u64 });
    }
    let two_n: BigUint = n * 2u32;
    Ok(factorial_valuation(&two_n, p) - 2 * factorial_valuation(n, p))
}

/// `v_p(C(2n, n))` by repeated division of the binomial coefficient itself.
/// Only for small `n`; used as a third, fully naive check.
pub fn valuation_by_division(n: u64, p: u32) -> u64 {
    let mut c = Natural::one();
    for k in 1..=n {
        c = c * (n + k) / k;
    }
    let p = Natural::from(p);
    let mut v = 0;
    loop {
        let (q, r) = c.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        c = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn spec105() -> CoprimalitySpec {
        CoprimalitySpec::new([3, 5, 7]).unwrap()
    }

    #[test]
    fn records() {
        assert!(is_coprime_record(&nat(10), &spec105()));
        assert!(!is_coprime_record(&nat(2), &spec105()));
        let s1155 = CoprimalitySpec::new([11, 3, 7, 5]).unwrap();
        assert_eq!(s1155.primes(), &[3, 5, 7, 11]);
        assert_eq!(s1155.modulus(), nat(1155));
        assert!(is_coprime_record(&nat(3160), &s1155));
    }

    #[test]
    fn counts() {
        assert_eq!(g_count(&nat(10), &spec105()), 2);
        assert_eq!(g_count(&nat(0), &spec105()), 0);
        assert_eq!(g_exponent(&nat(1), &spec105()), None);
        assert_eq!(members(&nat(10), &spec105()), [nat(0), nat(1), nat(10)]);
    }

    #[test]
    fn invalid_specs() {
        assert!(CoprimalitySpec::new([]).is_err());
        assert!(CoprimalitySpec::new([3, 9]).is_err());
        assert!(CoprimalitySpec::new([2, 3]).is_err());
        assert!(CoprimalitySpec::new([3, 3]).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation_oracle(&nat(2), 3).unwrap(), 1);
        assert_eq!(valuation_oracle(&nat(1), 7).unwrap(), 0);
        assert_eq!(valuation_by_division(10, 11), 1);
        assert!(valuation_oracle(&nat(2), 9).is_err());
    }
}
