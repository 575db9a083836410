//! JSON encodings of exact numbers: rationals as `{num, den}`.
//!
//! Integers that fit into an `i64` are written as JSON numbers, larger ones
//! as decimal strings, so no precision is ever lost.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntJson {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntJson {
    fn from(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntJson::Small(v),
            None => IntJson::Big(n.to_string()),
        }
    }
}

impl IntJson {
    pub fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            IntJson::Small(v) => Ok(BigInt::from(*v)),
            IntJson::Big(s) => BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: IntJson,
    pub den: IntJson,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson { num: q.numer().into(), den: q.denom().into() }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<Rational, String> {
        let den = self.den.to_bigint()?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(self.num.to_bigint()?, den))
    }
}

/// Serde adapter for `Rational` fields: `#[serde(with = "rational_serde")]`.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RationalJson::deserialize(d)?.to_rational().map_err(serde::de::Error::custom)
    }
}
