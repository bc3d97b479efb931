//! Arbitrary-precision rationals and parsing/formatting helpers.
//!
//! `Rat` is backed by `num_rational::BigRational`, which keeps values in
//! lowest terms with a positive denominator. Everything downstream relies on
//! those invariants for exact equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"13/84"`, `"-3"`, or a finite decimal like `"0.646"` exactly.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ExactError::Parse(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ExactError::Parse(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ExactError::Parse(s.to_string()))?;
        if d.is_zero() {
            return Err(ExactError::Parse(s.to_string()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -1
        } else {
            1
        };
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| ExactError::Parse(s.to_string()))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ExactError::Parse(s.to_string()));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| ExactError::Parse(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(f * sign, scale);
        return Ok(Rat::from_integer(i) + frac);
    }
    let n: BigInt = s.parse().map_err(|_| ExactError::Parse(s.to_string()))?;
    Ok(Rat::from_integer(n))
}

/// Renders as `"num/den"`, or just `"num"` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering truncated toward zero; every emitted digit is exact.
pub fn fmt_decimal(r: &Rat, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * Rat::from_integer(scale.clone())).trunc();
    let v = scaled.numer().abs();
    let (q, rem) = num_integer::Integer::div_rem(&v, &scale);
    let sign = if r.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{q}.{rem:0>width$}", width = digits)
}

pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
