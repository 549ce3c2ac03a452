//! JSON helpers for big integers: numbers when they fit in an i64,
//! decimal strings otherwise. Either form is accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

pub fn to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn from_value(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("{n} is not an integer")),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|e| format!("{s:?}: {e}")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_value(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        from_value(&v).map_err(D::Error::custom)
    }
}

pub mod many {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let vs: Vec<Value> = xs.iter().map(to_value).collect();
        vs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let vs = Vec::<Value>::deserialize(d)?;
        vs.iter().map(|v| from_value(v).map_err(D::Error::custom)).collect()
    }
}
