//! Exact rational arithmetic helpers.
//!
//! Distances, opening costs and every objective value in this crate are
//! arbitrary-precision rationals, so that strict cost comparisons are exact
//! order comparisons instead of tolerance checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// The rational type used throughout the crate.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds the integer rational `n` from an unsigned weight.
pub fn rat_uint(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Converts to `f64`, the float view of an exact value.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational magnitude exceeds f64 range")
}

/// Parses a rational from `p/q`, a decimal such as `1.15`, or a plain
/// integer. The result is exact: `1.15` parses as `23/20`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num
            .trim()
            .parse()
            .map_err(|_| RatParseError::Invalid(s.to_string()))?;
        let q: BigInt = den
            .trim()
            .parse()
            .map_err(|_| RatParseError::Invalid(s.to_string()))?;
        if q.is_zero() {
            return Err(RatParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse()
                .map_err(|_| RatParseError::Invalid(s.to_string()))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatParseError::Invalid(s.to_string()));
        }
        let frac_digits: BigInt = frac
            .parse()
            .map_err(|_| RatParseError::Invalid(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(frac_digits, scale);
        let int_part = Rat::from_integer(int_part);
        return Ok(if negative {
            int_part - frac_part
        } else {
            int_part + frac_part
        });
    }
    let p: BigInt = s
        .parse()
        .map_err(|_| RatParseError::Invalid(s.to_string()))?;
    Ok(Rat::from_integer(p))
}

/// Canonical string form: `p/q` in lowest terms, or just `p` for integers.
pub fn rat_str(r: &Rat) -> String {
    r.to_string()
}

/// Absolute value as f64, convenience for error reporting.
pub fn rat_abs_f64(r: &Rat) -> f64 {
    rat_to_f64(&r.abs())
}
