//! Number formatting shared by the CSV writers.

use num_rational::BigRational;
use polybase::certified::{format_significant, Interval};

/// Significant digits of every decimal column.
pub const SIG: usize = 20;

pub fn dec(r: &BigRational) -> String {
    format_significant(r, SIG)
}

/// Exact decimal expansion of the double, rounded to [`SIG`] digits; empty for non-finite values.
pub fn dec_f64(x: f64) -> String {
    BigRational::from_float(x).map(|r| dec(&r)).unwrap_or_default()
}

pub fn dec_opt(x: Option<f64>) -> String {
    x.map(dec_f64).unwrap_or_default()
}

/// `num/den`, or just `num` for integers.
pub fn rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lower(i: &Interval) -> String {
    dec(&i.lower())
}

pub fn upper(i: &Interval) -> String {
    dec(&i.upper())
}
