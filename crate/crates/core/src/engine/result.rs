use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::store::ElementId;
use crate::value::Scalar;

/// Result tree of a query. Maps keep projection order; [`canonical_json`]
/// sorts keys for comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum ResultValue {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    String(String),
    /// Element id; rendered as a decimal string.
    Id(ElementId),
    List(Vec<ResultValue>),
    Map(Vec<(String, ResultValue)>),
}

impl ResultValue {
    pub fn from_scalar(s: &Scalar) -> Self {
        match s {
            Scalar::Null => ResultValue::Null,
            Scalar::Bool(b) => ResultValue::Bool(*b),
            Scalar::Int(i) => ResultValue::Int(*i),
            Scalar::Float(f) => ResultValue::Float(*f),
            Scalar::String(s) => ResultValue::String(s.clone()),
        }
    }

    pub fn get(&self, key: &str) -> Option<&ResultValue> {
        match self {
            ResultValue::Map(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[ResultValue]> {
        match self {
            ResultValue::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ResultValue::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("result values serialize")
    }

    /// Total order used by sorting: nulls, booleans, numbers (Int and Float
    /// compared numerically), ids, strings by code point, then containers.
    pub fn sort_cmp(&self, other: &ResultValue) -> Ordering {
        fn rank(v: &ResultValue) -> u8 {
            match v {
                ResultValue::Null => 0,
                ResultValue::Bool(_) => 1,
                ResultValue::Int(_) | ResultValue::Float(_) => 2,
                ResultValue::Id(_) => 3,
                ResultValue::String(_) => 4,
                ResultValue::List(_) => 5,
                ResultValue::Map(_) => 6,
            }
        }
        let num = |a: f64, b: f64| a.partial_cmp(&b).unwrap_or(Ordering::Equal);
        match (self, other) {
            (ResultValue::Bool(a), ResultValue::Bool(b)) => a.cmp(b),
            (ResultValue::Int(a), ResultValue::Int(b)) => a.cmp(b),
            (ResultValue::Int(a), ResultValue::Float(b)) => num(*a as f64, *b),
            (ResultValue::Float(a), ResultValue::Int(b)) => num(*a, *b as f64),
            (ResultValue::Float(a), ResultValue::Float(b)) => num(*a, *b),
            (ResultValue::Id(a), ResultValue::Id(b)) => a.cmp(b),
            (ResultValue::String(a), ResultValue::String(b)) => a.cmp(b),
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }
}

impl Serialize for ResultValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ResultValue::Null => s.serialize_unit(),
            ResultValue::Bool(b) => s.serialize_bool(*b),
            ResultValue::Int(i) => s.serialize_i64(*i),
            ResultValue::Float(f) => s.serialize_f64(*f),
            ResultValue::String(v) => s.serialize_str(v),
            ResultValue::Id(id) => s.serialize_str(&id.to_string()),
            ResultValue::List(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            ResultValue::Map(entries) => {
                let mut map = s.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

/// JSON text with object keys sorted, so equal trees give equal bytes.
pub fn canonical_json(v: &ResultValue) -> String {
    // serde_json's map type is ordered by key.
    serde_json::to_string(&v.to_json()).expect("json values serialize")
}
