//! The scalar type used everywhere, plus text conversions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with `digits` fractional digits, rounded half away from zero.
pub fn to_decimal(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let mut n = scaled.abs().round().to_integer();
    let negative = scaled.is_negative() && !n.is_zero();
    let (whole, rest) = n.div_rem(&scale);
    n = rest;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let mut f = n.to_string();
        while f.len() < digits as usize {
            f.insert(0, '0');
        }
        let f = f.trim_end_matches('0');
        if !f.is_empty() {
            out.push('.');
            out.push_str(f);
        }
    }
    out
}

/// Parses a plain decimal literal such as `-12.5` exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a decimal: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (whole, fracpart) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fracpart.is_empty() {
        return Err(bad());
    }
    let digits = format!("{whole}{fracpart}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = BigInt::from(10u32).pow(fracpart.len() as u32);
    let q = Rational::new(n, d);
    Ok(if neg { -q } else { q })
}

pub fn min_rational<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

/// Least common multiple of denominators, used to clear fractions.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn fract(q: &Rational) -> Rational {
    q - q.floor()
}
