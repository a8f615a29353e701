//! Exact rational arithmetic used for every payoff and probability.
//!
//! All game math runs on arbitrary-precision fractions; no floating point
//! exists anywhere in this crate. Values are always stored in lowest terms
//! with a positive denominator, and `Display` renders them canonically as
//! `p/q` (integers without the `/q`).

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

pub use num_rational::BigRational as Rational;

/// Shorthand for `numer/denom` as an exact rational.
///
/// Panics if `denom` is zero; sign is normalized onto the numerator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Error produced when a numeric literal cannot be read exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberParseError {
    pub message: String,
}

impl fmt::Display for NumberParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for NumberParseError {}

fn malformed(text: &str, why: &str) -> NumberParseError {
    NumberParseError {
        message: format!("malformed number `{text}`: {why}"),
    }
}

/// Parses an integer (`-10`), a fraction (`11/2`), or a finite decimal
/// (`0.1`) into an exact rational. Decimals convert exactly: `0.1` becomes
/// `1/10`, never a binary float.
pub fn parse_rational(text: &str) -> Result<Rational, NumberParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(malformed(text, "empty"));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() {
        return Err(malformed(text, "sign without digits"));
    }

    let parse_int = |part: &str| -> Result<BigInt, NumberParseError> {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed(text, "expected digits"));
        }
        Ok(part.parse::<BigInt>().expect("digits parse as BigInt"))
    };

    let value = if let Some((numer, denom)) = digits.split_once('/') {
        let n = parse_int(numer)?;
        let d = parse_int(denom)?;
        if d.is_zero() {
            return Err(malformed(text, "zero denominator"));
        }
        Rational::new(n, d)
    } else if let Some((whole, frac)) = digits.split_once('.') {
        let w = parse_int(whole)?;
        let f = parse_int(frac)?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        Rational::new(w * &scale + f, scale)
    } else {
        Rational::from_integer(parse_int(digits)?)
    };

    Ok(if sign < 0 { -value } else { value })
}
