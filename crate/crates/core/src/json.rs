//! JSON encodings shared by the public types.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise. Rationals are strings `"p/q"` (or `"p"`); plain
//! JSON integers are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Invalid(format!("expected an integer, found {n}")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| Error::Invalid(format!("expected an integer, found {s:?}"))),
        other => Err(Error::Invalid(format!("expected an integer, found {other}"))),
    }
}

pub fn rational_to_json(x: &BigRational) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("expected a rational, found {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(BigRational::from_integer(bigint_from_json(v)?)),
        other => Err(Error::Invalid(format!("expected a rational, found {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_roundtrip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(bigint_from_json(&bigint_to_json(&big)).unwrap(), big);
        assert_eq!(bigint_to_json(&BigInt::from(-7)), Value::from(-7));
    }

    #[test]
    fn rationals_parse() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(rational_to_json(&q), Value::String("-3/2".into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
