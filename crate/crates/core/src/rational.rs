//! Parsing and formatting of exact rationals.
//!
//! Rationals cross text boundaries as `"num/den"` strings (or bare
//! integers). Decimal rendering is available with an explicit digit count.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::{Error, Rational, Result};

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if s.contains('/') {
            return Err(Error::Parse(format!("malformed rational {s:?}")));
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let all = format!("{int_digits}{frac}");
        if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal {s:?}")));
        }
        let num = BigInt::from_str(&all).map_err(|e| Error::Parse(e.to_string()))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let r = Rational::from_str(s).map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    Ok(r)
}

/// `num/den`, or just `num` for integers.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with `digits` fractional digits, rounded half away
/// from zero.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let mut n = scaled.to_integer();
    let frac = scaled - Rational::from_integer(n.clone());
    if frac * Rational::from_integer(BigInt::from(2)) >= Rational::one() {
        n += 1;
    }
    let (int, rem) = n.div_rem(&scale);
    let sign = if r.is_negative() && !n.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    let rem = rem.to_string();
    format!("{sign}{int}.{}{rem}", "0".repeat(digits - rem.len()))
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}

/// Serde adapter for `Vec<Rational>` as a list of strings.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 3 ").unwrap(), from_int(3));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.2/3").is_err());
    }

    #[test]
    fn format_forms() {
        assert_eq!(format(&ratio(5, 6)), "5/6");
        assert_eq!(format(&from_int(1)), "1");
        assert_eq!(format_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(format_decimal(&ratio(1, 40), 2), "0.03");
        assert_eq!(format_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&ratio(1, 1), 3), "1.000");
        assert_eq!(format_decimal(&ratio(7, 2), 0), "4");
        assert_eq!(format_decimal(&ratio(-1, 1000), 2), "0.00");
    }
}
