//! Exact rational helpers shared by the model and generating-function code.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_from_biguint(v: &BigUint) -> Q {
    Q::from_integer(BigInt::from(v.clone()))
}

/// Binomial coefficient as a big unsigned integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `base^exp` for a signed exponent; errors on `0^negative`.
pub fn pow_signed(base: &Q, exp: i64) -> Result<Q> {
    if exp >= 0 {
        Ok(num_traits::pow(base.clone(), exp as usize))
    } else if base.is_zero() {
        Err(Error::domain("zero raised to a negative power"))
    } else {
        Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
    }
}

pub fn to_f64(v: &Q) -> f64 {
    // Scale down huge numerators/denominators before converting so ratios
    // of big integers do not overflow to inf/inf.
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = v.numer().bits().max(v.denom().bits()).saturating_sub(1000);
            let n = (v.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (v.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` or `"1e-3"`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::param(format!("cannot parse '{s}' as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i64 - 1;
    let mut value = Q::from_integer(digits) * pow_signed(&qi(10), scale)?;
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Decimal rendering when the denominator is of the form 2^a 5^b, otherwise `p/q`.
pub fn format_rational(v: &Q) -> String {
    let mut den = v.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return v.numer().to_string();
    }
    let scaled = v * Q::from_integer(num_traits::pow(BigInt::from(10), places as usize));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places as usize);
    let sign = if v.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// `p/q` form used by the polynomial text format (denominator always written).
pub fn format_fraction(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Serde adapter writing a rational as its `p/q` string.
pub fn serialize_fraction<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_fraction(v))
}
