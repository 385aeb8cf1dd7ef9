//! Exact rational scalars.
//!
//! The scalar field everywhere in the exact layer is `num_rational::BigRational`,
//! which already maintains the canonical form (reduced, positive denominator).
//! This module adds parsing and rendering in the `"p/q"` convention used by the
//! CLI and the JSON schemas, plus exact conversion from decimal literals.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat_i64(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `"p/q"`, or just `"p"` when the denominator is 1.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, integers, and exact decimal/scientific literals
/// (`"0.5"` -> 1/2, `"1e-12"` -> 10^-12). Field names the offending input
/// in error messages.
pub fn parse_rational(s: &str, field: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse(field, "empty rational literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::parse(field, format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::parse(field, format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::parse(field, format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| Error::parse(field, format!("not a rational literal: `{s}`")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let (m, e) = s.split_at(pos);
            (m, e[1..].parse::<i64>().ok()?)
        }
        None => (s, 0i64),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let negative = int_part.starts_with('-');
    let int_digits = match int_part.as_bytes().first() {
        Some(b'-') | Some(b'+') => &int_part[1..],
        _ => int_part,
    };
    if (int_digits.is_empty() && frac_part.is_empty())
        || !int_digits.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let shift = exp10 - frac_part.len() as i64;
    let base = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(numer * base.pow(shift as u32))
    } else {
        BigRational::new(numer, base.pow((-shift) as u32))
    })
}

/// Exact conversion; every finite f64 is a dyadic rational.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Rational::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exponent == 0 {
        (fraction, -1074i64)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let m = BigInt::from(sign) * BigInt::from(mantissa);
    Some(if exp >= 0 {
        BigRational::from_integer(m << (exp as usize))
    } else {
        BigRational::new(m, BigInt::one() << ((-exp) as usize))
    })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let digits = 18i64;
    let k = decimal_exponent_estimate(r);
    let p = digits - 1 - k;
    let scaled = scale_by_pow10(r, p);
    let rounded = round_to_bigint(&scaled);
    let mantissa = bigint_to_f64(&rounded);
    mantissa * 10f64.powi((-p) as i32)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut value = 0.0f64;
    for d in digits.iter().rev() {
        value = value * 1.8446744073709552e19 + *d as f64;
    }
    if sign == Sign::Minus {
        -value
    } else {
        value
    }
}

/// floor(log10(|r|)) up to +-1; callers correct after scaling.
fn decimal_exponent_estimate(r: &Rational) -> i64 {
    if r.is_zero() {
        return 0;
    }
    let nb = r.numer().abs().bits() as i64;
    let db = r.denom().bits() as i64;
    (((nb - db) as f64) * std::f64::consts::LOG10_2).floor() as i64
}

fn scale_by_pow10(r: &Rational, p: i64) -> Rational {
    let base = BigInt::from(10);
    if p >= 0 {
        r * BigRational::from_integer(base.pow(p as u32))
    } else {
        r / BigRational::from_integer(base.pow((-p) as u32))
    }
}

fn round_to_bigint(r: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let (n, d) = (r.numer(), r.denom());
    let (q, rem) = num_integer::Integer::div_rem(n, d);
    if (&rem * &two).abs() >= *d {
        if r.is_negative() {
            q - BigInt::one()
        } else {
            q + BigInt::one()
        }
    } else {
        q
    }
}
