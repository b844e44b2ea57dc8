//! The exact numeric tower: every value in this crate is a [`Rational`].

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Integer-valued rational.
pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-0.125"` or `"1.5e-3"`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| err())?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let shift = num::pow(ten, scale.unsigned_abs() as usize);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * shift)
    } else {
        Rational::new(digits, shift)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Number of significant digits used by [`to_decimal`].
pub const DECIMAL_DIGITS: u32 = 20;

/// Advisory decimal rendering with `digits` significant digits, rounded
/// half-to-even, trailing zeros trimmed.
pub fn to_decimal(q: &Rational, digits: u32) -> String {
    assert!(digits > 0);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    let ten = BigInt::from(10u32);

    // exponent e with 10^e <= |q| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let pow10 = |k: i64| num::pow(ten.clone(), k.unsigned_abs() as usize);
    let ge_pow = |k: i64| {
        if k >= 0 {
            num >= &den * pow10(k)
        } else {
            &num * pow10(k) >= den
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }

    // |q| * 10^(digits-1-e), rounded half-to-even
    let shift = digits as i64 - 1 - e;
    let (sn, sd) = if shift >= 0 {
        (&num * pow10(shift), den.clone())
    } else {
        (num.clone(), &den * pow10(shift))
    };
    let (mut n, rem) = sn.div_rem(&sd);
    let twice = rem * 2u32;
    if twice > sd || (twice == sd && n.is_odd()) {
        n += 1u32;
    }
    if n == pow10(digits as i64) {
        n /= 10u32;
        e += 1;
    }

    let s = n.to_string();
    let (int_part, frac_part) = if (0..21).contains(&e) {
        let split = (e + 1) as usize;
        if split >= s.len() {
            (format!("{s}{}", "0".repeat(split - s.len())), String::new())
        } else {
            (s[..split].to_string(), s[split..].to_string())
        }
    } else if (-10..0).contains(&e) {
        (
            "0".to_string(),
            format!("{}{s}", "0".repeat((-e - 1) as usize)),
        )
    } else {
        let frac = s[1..].trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        return if frac.is_empty() {
            format!("{sign}{}e{e}", &s[..1])
        } else {
            format!("{sign}{}.{frac}e{e}", &s[..1])
        };
    };
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Smallest integer `>= q`.
pub fn ceil_to_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Lossy conversion for diagnostics only.
pub fn approx_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn is_nonnegative(q: &Rational) -> bool {
    q.numer().sign() != Sign::Minus
}
