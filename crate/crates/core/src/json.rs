//! Serialization helpers. Integers and rationals are written as decimal
//! strings (`"-3"`, `"7/2"`) so that no precision is lost in JSON.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA: &str = "expgap/1";

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
}

/// Accepts `"p"`, `"p/q"` and finite decimals such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_bigint(n)?;
        let d = parse_bigint(d)?;
        if d == BigInt::from(0) {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.chars().all(|c| c.is_ascii_digit()) {
            let num = parse_bigint(&format!("{ip}{fp}"))?;
            let den = num_traits::pow(BigInt::from(10), fp.len());
            return Ok(BigRational::new(num, den));
        }
        return Err(Error::InvalidInput(format!("not a rational: {s:?}")));
    }
    Ok(BigRational::from_integer(parse_bigint(s)?))
}

pub fn rational_value(q: &BigRational) -> Value {
    Value::String(rational_to_string(q))
}

pub fn int_value(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

/// Serde adapter for `BigRational` fields.
pub mod rational {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }
}
