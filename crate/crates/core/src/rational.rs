//! Exact scalars: parsing, string form, and decimal square roots.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{JtError, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"-p"`, `"p/q"` or an exact decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || JtError::Parse(format!("invalid rational {s:?}"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_int(p.trim()).ok_or_else(bad)?;
        let q = parse_int(q.trim()).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(JtError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Wire form: `"p"` for integers, `"p/q"` otherwise, always in lowest terms.
pub fn to_wire(r: &Rational) -> String {
    r.to_string()
}

/// `sqrt(r)` rendered with `digits` fractional digits, rounded half up.
///
/// Works on integers only: with `n = floor(sqrt(r) * 10^digits)` the result
/// rounds up exactly when `(2n + 1)^2 <= 4 r 10^(2 digits)`.
pub fn sqrt_decimal(r: &Rational, digits: usize) -> Result<String> {
    if r.is_negative() {
        return Err(JtError::Domain(format!("square root of negative {r}")));
    }
    let scale = num::pow(BigInt::from(10u32), 2 * digits);
    let p = r.numer() * &scale;
    let q = r.denom().clone();
    let mut n = (&p / &q).sqrt();
    let two_n_plus_one: BigInt = &n * 2 + 1;
    if &two_n_plus_one * &two_n_plus_one * &q <= p * 4 {
        n += 1;
    }
    let text = n.to_string();
    if digits == 0 {
        return Ok(text);
    }
    let padded = format!("{text:0>width$}", width = digits + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    Ok(format!("{int_part}.{frac_part}"))
}

/// Exact `2^-k`.
pub fn half_pow(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_wire_shapes() {
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-2/-4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("3.").unwrap(), int(3));
        assert_eq!(parse_rational("0.1").unwrap() * int(10), int(1));
        for bad in ["", "1/0", "abc", "1.2.3", "--1", "1/", "/2", "1e3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn wire_form_is_lowest_terms() {
        assert_eq!(to_wire(&ratio(10, 4)), "5/2");
        assert_eq!(to_wire(&int(5)), "5");
        assert_eq!(to_wire(&ratio(-6, 3)), "-2");
    }

    #[test]
    fn sqrt_decimal_rounds_correctly() {
        assert_eq!(sqrt_decimal(&int(5), 12).unwrap(), "2.236067977500");
        assert_eq!(sqrt_decimal(&int(4), 3).unwrap(), "2.000");
        assert_eq!(sqrt_decimal(&int(2), 5).unwrap(), "1.41421");
        assert_eq!(sqrt_decimal(&ratio(1, 4), 2).unwrap(), "0.50");
        assert_eq!(sqrt_decimal(&int(0), 2).unwrap(), "0.00");
        assert_eq!(sqrt_decimal(&ratio(1, 100), 0).unwrap(), "0");
        // sqrt(0.0025) = 0.05 exactly; at one digit it is a tie and rounds up.
        assert_eq!(sqrt_decimal(&ratio(1, 400), 1).unwrap(), "0.1");
        assert!(sqrt_decimal(&int(-1), 2).is_err());
    }

    #[test]
    fn half_powers() {
        assert_eq!(half_pow(0), int(1));
        assert_eq!(half_pow(3), ratio(1, 8));
    }
}
