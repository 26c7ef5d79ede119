//! Exact rational scalar type and its lossless string form.
//!
//! All certified arithmetic (threshold certificates, separator margins,
//! network weights) runs on arbitrary-precision rationals. Reports and
//! network files serialize a rational as a decimal string when its
//! denominator divides a power of ten (`"-2"`, `"0.375"`), and as a
//! `"p/q"` fraction otherwise (`"1/3"`), so round-trips are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Formats a rational losslessly: integer, finite decimal, or `p/q`.
pub fn format_rat(value: &Rat) -> String {
    let numer = value.numer();
    let denom = value.denom();
    if denom.is_one() {
        return numer.to_string();
    }
    // A reduced fraction has a finite decimal expansion exactly when the
    // denominator is of the form 2^a * 5^b.
    let mut rest = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut pow2 = 0u32;
    let mut pow5 = 0u32;
    while rest.is_multiple_of(&two) {
        rest /= &two;
        pow2 += 1;
    }
    while rest.is_multiple_of(&five) {
        rest /= &five;
        pow5 += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", numer, denom);
    }
    let places = pow2.max(pow5);
    let scale = BigInt::from(10).pow(places);
    let scaled = numer * &scale / denom;
    let negative = scaled.is_negative();
    let digits = scaled.magnitude().to_string();
    let digits = if digits.len() <= places as usize {
        format!("{}{}", "0".repeat(places as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    let (int_part, frac_part) = digits.split_at(split);
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac_part)
}

/// Parses the formats produced by [`format_rat`].
pub fn parse_rat(text: &str) -> Result<Rat, ParseRatError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRatError::Empty);
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRatError::Invalid(text.to_string()))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRatError::Invalid(text.to_string()))?;
        if den.is_zero() {
            return Err(ParseRatError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRatError::Invalid(text.to_string()));
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_digits.is_empty() {
            return Err(ParseRatError::Invalid(text.to_string()));
        }
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let int_value: BigInt = int_digits
            .parse()
            .map_err(|_| ParseRatError::Invalid(text.to_string()))?;
        let frac_value: BigInt = frac_part
            .parse()
            .map_err(|_| ParseRatError::Invalid(text.to_string()))?;
        let magnitude = int_value * &scale + frac_value;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let int_value: BigInt = text
        .parse()
        .map_err(|_| ParseRatError::Invalid(text.to_string()))?;
    Ok(Rat::from_integer(int_value))
}

/// Converts to `f64`, which is exact whenever the value fits a double.
pub fn rat_to_f64(value: &Rat) -> f64 {
    value
        .to_f64()
        .unwrap_or_else(|| value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN))
}

/// Exact rational from a double (every finite double is a binary fraction).
pub fn rat_from_f64(value: f64) -> Option<Rat> {
    Rat::from_float(value)
}
