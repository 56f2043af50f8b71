//! Scalar values shared by requests, traversals and the graph store.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::schema::Datatype;
use crate::synth::CompareOp;

/// A property value or literal.
///
/// Serializes as the plain JSON value; `Float` keeps a fractional part in
/// JSON (`1.0`) so it reads back as a float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    String(String),
}

impl Scalar {
    pub fn is_null(&self) -> bool {
        matches!(self, Scalar::Null)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Scalar::Int(i) => Some(i as f64),
            Scalar::Float(f) => Some(f),
            _ => None,
        }
    }

    /// Whether this value may be stored under a property of `datatype`.
    pub fn fits(&self, datatype: Datatype) -> bool {
        matches!(
            (self, datatype),
            (Scalar::Bool(_), Datatype::Boolean)
                | (Scalar::Int(_), Datatype::Int)
                | (Scalar::Float(_), Datatype::Float)
                | (Scalar::String(_), Datatype::String | Datatype::Id)
        )
    }

    /// Ordering between comparable values: numbers with numbers (Int and
    /// Float mixed), strings by code point, booleans with booleans.
    /// `None` for incomparable kinds, NaN and nulls.
    pub fn compare(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Some(a.cmp(b)),
            (Scalar::String(a), Scalar::String(b)) => Some(a.cmp(b)),
            (Scalar::Bool(a), Scalar::Bool(b)) => Some(a.cmp(b)),
            (a, b) => a.as_f64()?.partial_cmp(&b.as_f64()?),
        }
    }

    /// Evaluates `self <op> operand`. Incomparable values never match.
    pub fn satisfies(&self, op: CompareOp, operand: &Scalar) -> bool {
        let Some(ord) = self.compare(operand) else { return false };
        match op {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Neq => ord != Ordering::Equal,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Gte => ord != Ordering::Less,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Lte => ord != Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Null => f.write_str("null"),
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Int(i) => write!(f, "{i}"),
            Scalar::Float(x) => write!(f, "{x:?}"),
            Scalar::String(s) => write!(f, "{s:?}"),
        }
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::String(s.into())
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Self {
        Scalar::Int(i)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Bool(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OrderDirection {
    Asc,
    Desc,
}

impl OrderDirection {
    pub fn apply(self, ord: Ordering) -> Ordering {
        match self {
            OrderDirection::Asc => ord,
            OrderDirection::Desc => ord.reverse(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_promotion() {
        assert!(Scalar::Int(2).satisfies(CompareOp::Lt, &Scalar::Float(2.5)));
        assert!(Scalar::Float(3.0).satisfies(CompareOp::Eq, &Scalar::Int(3)));
        assert!(!Scalar::String("3".into()).satisfies(CompareOp::Eq, &Scalar::Int(3)));
        assert!(!Scalar::String("3".into()).satisfies(CompareOp::Neq, &Scalar::Int(3)));
    }

    #[test]
    fn codepoint_strings() {
        assert!(Scalar::from("Z").satisfies(CompareOp::Lt, &Scalar::from("a")));
        assert!(Scalar::from("é").satisfies(CompareOp::Gt, &Scalar::from("z")));
    }

    #[test]
    fn json_shape() {
        let v: Scalar = serde_json::from_str("1.0").unwrap();
        assert_eq!(v, Scalar::Float(1.0));
        assert_eq!(serde_json::to_string(&Scalar::Float(1.0)).unwrap(), "1.0");
        let v: Scalar = serde_json::from_str("7").unwrap();
        assert_eq!(v, Scalar::Int(7));
    }
}
