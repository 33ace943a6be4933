//! Block counts of integers with binary digits in both base 3 and base 4, the
//! exponent profile of those counts, and certified classification of block
//! slopes against avoided-slope windows.
//!
//! Block `n >= 1` is `[4^n, 4^(n+1))`; block 0 is `[0, 4)`, so that its count
//! includes 0 and the sequence starts `2, 1, 0, 3, 6, 3, 0, 5, 12, 11`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cantor::{Rational, SlopeWindows};
use crate::certified::{self, Interval};
use crate::joint::JointCounter;
use crate::numeral::{ConstraintSystem, DigitConstraint, Natural};
use crate::search::{self, SearchSpec};

/// Outcome of a certified slope classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlopeClass {
    InWindow,
    Outside,
    Undecided,
}

impl SlopeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SlopeClass::InWindow => "InWindow",
            SlopeClass::Outside => "Outside",
            SlopeClass::Undecided => "Undecided",
        }
    }
}

/// One row of the exponent profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePoint {
    pub n: u64,
    pub s_value: u64,
    /// `ln S(n) / (n ln 4)`; `None` when `S(n) = 0` or `n = 0`.
    pub exponent: Option<f64>,
    pub slope_class: SlopeClass,
}

/// Hit count over an initial segment `[1, n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub n: u64,
    pub count: u64,
    pub ratio: f64,
}

/// The base-3 & base-4 binary-digit system.
pub fn base34_system() -> ConstraintSystem {
    ConstraintSystem::binary(&[3, 4]).expect("valid bases")
}

/// Value range `[lo, hi)` of block `n`.
pub fn block_range(n: u64) -> (Natural, Natural) {
    let four = Natural::from(4u32);
    let hi = num_traits::pow(four.clone(), n as usize + 1);
    let lo = if n == 0 {
        Natural::zero()
    } else {
        num_traits::pow(four, n as usize)
    };
    (lo, hi)
}

/// Search specification for block `n`.
pub fn block_spec(n: u64) -> SearchSpec {
    let (lo, hi) = block_range(n);
    SearchSpec::from_system(&base34_system(), lo, hi).expect("nonempty block")
}

/// `S(n)`: members of the base-3&4 binary system in block `n`.
pub fn s_value(n: u64) -> u64 {
    let b4 = DigitConstraint::binary(4).expect("valid base");
    let b3 = DigitConstraint::binary(3).expect("valid base");
    let (lo, hi) = block_range(n);
    let ternary_len = crate::numeral::raw_digits(&(hi - 1u32), 3).len() as u32;
    if n == 0 {
        return JointCounter::new(b4, 1, b3, ternary_len).count(&lo, &Natural::zero());
    }
    // The leading base-4 digit of the block is fixed at 1.
    JointCounter::new(b4, n as u32, b3, ternary_len).count(&lo, &Natural::zero())
}

/// [`s_value`] through the general pruned search.
pub fn s_value_search(n: u64) -> u64 {
    search::count_members(&block_spec(n))
}

/// `ln 2 / ln 3 − 1/2`, the conjectured growth exponent of `S`.
pub fn reference_exponent(prec: u32) -> Interval {
    certified::log_ratio(2, 3, prec).sub(&Interval::from_ratio(&BigInt::one(), &BigInt::from(2), prec))
}

/// `ln S / (n ln 4)`.
pub fn exponent_of(n: u64, s: u64) -> Option<f64> {
    (n > 0 && s > 0).then(|| libm::log(s as f64) / (n as f64 * libm::log(4.0)))
}

/// Exact block slope `4^n / 9^f` with `f` maximal such that `9^f <= 4^n`;
/// equals `9^{frac(n log 4 / log 9)}`.
pub fn exact_slope(n: u64) -> Rational {
    let four_n = num_traits::pow(BigInt::from(4), n as usize);
    let mut nine_f = BigInt::one();
    loop {
        let next = &nine_f * 9;
        if next > four_n {
            break;
        }
        nine_f = next;
    }
    BigRational::new(four_n, nine_f)
}

/// Certified slope classifier with constants cached per precision.
#[derive(Debug, Clone)]
pub struct SlopeClassifier {
    windows: SlopeWindows,
    cap: u32,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    prec: u32,
    /// `ln 4 / ln 9`.
    theta: Interval,
    /// `log_9` of each window endpoint.
    ends: Vec<(Interval, Interval)>,
}

impl SlopeClassifier {
    /// Windows must lie inside `[1, 9]`.
    pub fn new(windows: SlopeWindows, precision_cap: u32) -> Self {
        SlopeClassifier {
            windows,
            cap: precision_cap.max(certified::DEFAULT_PRECISION),
            levels: Vec::new(),
        }
    }

    pub fn windows(&self) -> &SlopeWindows {
        &self.windows
    }

    fn ensure_level(&mut self, idx: usize) {
        while self.levels.len() <= idx {
            let prec = certified::DEFAULT_PRECISION << self.levels.len();
            let w = prec + 16;
            let ln9 = certified::ln_u64(9, w);
            let theta = certified::ln_u64(4, w).div(&ln9).expect("ln 9 > 0").with_precision(prec);
            let log9 = |r: &Rational| {
                certified::ln_rational(r, w)
                    .div(&ln9)
                    .expect("ln 9 > 0")
                    .with_precision(prec)
            };
            let ends = self.windows.components().iter().map(|(a, b)| (log9(a), log9(b))).collect();
            self.levels.push(Level { prec, theta, ends });
        }
    }

    /// Certified enclosure of `frac(n · ln 4 / ln 9)` at a cached precision level,
    /// or `None` if the integer part is not yet determined.
    fn fraction(level: &Level, n: u64) -> Option<Interval> {
        let t = level.theta.mul_integer(&BigInt::from(n));
        let floor = t.floor()?;
        Some(t.add_integer(&-floor))
    }

    /// Classifies the slope `9^{frac(n ln4/ln9)}` of block `n`, doubling the
    /// precision until decided or the cap is reached.
    pub fn classify(&mut self, n: u64) -> SlopeClass {
        let mut idx = 0;
        loop {
            self.ensure_level(idx);
            let level = &self.levels[idx];
            if let Some(frac) = Self::fraction(level, n) {
                let mut inside = false;
                let mut undecided = false;
                for (a, b) in &level.ends {
                    if a.certainly_lt(&frac) && frac.certainly_lt(b) {
                        inside = true;
                        break;
                    }
                    if !(frac.certainly_le(a) || b.certainly_le(&frac)) {
                        undecided = true;
                    }
                }
                if inside {
                    return SlopeClass::InWindow;
                }
                if !undecided {
                    return SlopeClass::Outside;
                }
            }
            if level.prec >= self.cap {
                return SlopeClass::Undecided;
            }
            idx += 1;
        }
    }

    /// Certified enclosure of the block slope itself.
    pub fn slope(&mut self, n: u64) -> Interval {
        let mut idx = 0;
        loop {
            self.ensure_level(idx);
            let level = &self.levels[idx];
            if let Some(frac) = Self::fraction(level, n) {
                let ln9 = certified::ln_u64(9, level.prec);
                return certified::exp(&frac.mul(&ln9));
            }
            idx += 1;
        }
    }
}

/// Classifies block `n` against `windows`, with precision doubling from 128 bits up to `precision_cap`.
pub fn slope_classify(n: u64, windows: &SlopeWindows, precision_cap: u32) -> SlopeClass {
    SlopeClassifier::new(windows.clone(), precision_cap).classify(n)
}

/// Exact classification through [`exact_slope`]; practical for moderate `n`.
pub fn slope_classify_exact(n: u64, windows: &SlopeWindows) -> SlopeClass {
    if windows.contains(&exact_slope(n)) {
        SlopeClass::InWindow
    } else {
        SlopeClass::Outside
    }
}

/// Rows `n = 1..=n_max`.
pub fn exponent_profile(n_max: u64, windows: &SlopeWindows) -> Vec<SequencePoint> {
    let mut classifier = SlopeClassifier::new(windows.clone(), certified::DEFAULT_PRECISION_CAP);
    (1..=n_max).map(|n| sequence_point(n, &mut classifier)).collect()
}

pub fn sequence_point(n: u64, classifier: &mut SlopeClassifier) -> SequencePoint {
    let s = s_value(n);
    SequencePoint {
        n,
        s_value: s,
        exponent: exponent_of(n, s),
        slope_class: classifier.classify(n),
    }
}

/// Fraction of `i ∈ [1, n]` with `hit(i)`.
pub fn density_upto(mut hit: impl FnMut(u64) -> bool, n: u64) -> DensityEstimate {
    assert!(n >= 1, "density horizon must be positive");
    let count = (1..=n).filter(|&i| hit(i)).count() as u64;
    DensityEstimate {
        n,
        count,
        ratio: count as f64 / n as f64,
    }
}
