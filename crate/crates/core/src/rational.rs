//! Exact rational scalars and their textual form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"num/den"` or `"num"`. Decimal notation is rejected so that every
/// value read from disk is exact.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |message: &str| Error::Parse {
        location: format!("{text:?}"),
        message: message.to_string(),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Always renders as `num/den`, including integers (`1/1`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn clamp_unit(value: &Rational) -> Rational {
    if value.is_negative() {
        zero()
    } else if *value > one() {
        one()
    } else {
        value.clone()
    }
}

pub fn is_unit(value: &Rational) -> bool {
    !value.is_negative() && *value <= one()
}

/// Positive part `max(v, 0)`.
pub fn positive_part(value: Rational) -> Rational {
    if value.is_negative() {
        zero()
    } else {
        value
    }
}
