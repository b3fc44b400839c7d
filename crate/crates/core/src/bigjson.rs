//! Serde adapters writing arbitrary-precision integers as plain JSON numbers.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Number;

fn to_number<S: Serializer>(text: String) -> Result<Number, S::Error> {
    Number::from_str(&text).map_err(serde::ser::Error::custom)
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&to_number::<S>(x.to_string())?)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Number>::deserialize(d)?;
        raw.iter().map(|n| BigInt::from_str(&n.to_string()).map_err(D::Error::custom)).collect()
    }
}

pub mod uint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&to_number::<S>(v.to_string())?, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let raw = Number::deserialize(d)?;
        BigUint::from_str(&raw.to_string()).map_err(D::Error::custom)
    }
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&to_number::<S>(v.to_string())?, s)
    }
}
