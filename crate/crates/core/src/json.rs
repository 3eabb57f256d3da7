//! Exact-value string encodings shared by every JSON output.
//!
//! Rationals are written `"num/den"` (always with a denominator, `"3/1"` for
//! integers) and big integers as plain decimal strings, so no value ever
//! passes through a float.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serializer};

use crate::{Error, Result};

pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let den = BigInt::from_str(den).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("{s:?}: zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// `#[serde(with = "crate::json::rational_str")]`
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&rational_to_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "crate::json::bigint_str")]`
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        // Config files may carry small integers as JSON numbers.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_bigint(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(BigInt::from(i)),
        }
    }
}

pub mod opt_bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.serialize_some(&n.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Str(s)) => parse_bigint(&s).map(Some).map_err(serde::de::Error::custom),
            Some(Raw::Int(i)) => Ok(Some(BigInt::from(i))),
        }
    }
}

/// Decimal rendering for heuristic and height values.
pub fn decimal(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-4 && v.abs() < 1e15) {
        format!("{v:.12}")
    } else {
        format!("{v:.12e}")
    }
}

/// `v` rounded to the decimals that `err` still supports.
pub fn decimal_with_error(v: f64, err: f64) -> String {
    if err.is_nan() || err <= 0.0 || !err.is_finite() {
        return decimal(v);
    }
    let places = (-err.log10()).ceil().clamp(0.0, 15.0) as usize;
    format!("{v:.places$}")
}
