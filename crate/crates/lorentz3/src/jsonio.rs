//! JSON value conventions shared by the CLI and file formats.
//!
//! Exact rationals serialize as strings (`"3/4"`, `"-2"`), floats as JSON
//! numbers. Both backends accept both forms on input; the CLI decides which
//! backend to run from the presence of bare numbers.

use num_rational::BigRational;
use serde_json::Value;

use crate::kernel::{Fl, Rat, Scalar};

pub trait JsonScalar: Scalar {
    fn to_json_value(&self) -> Value;
    fn from_json_value(v: &Value) -> Option<Self>;
}

impl JsonScalar for Rat {
    fn to_json_value(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json_value(v: &Value) -> Option<Rat> {
        match v {
            Value::String(s) => Rat::parse(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Rat::from_int(i))
                } else {
                    // Exact binary expansion of the float.
                    BigRational::from_float(n.as_f64()?).map(Rat)
                }
            }
            _ => None,
        }
    }
}

impl JsonScalar for Fl {
    fn to_json_value(&self) -> Value {
        serde_json::Number::from_f64(self.value)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json_value(v: &Value) -> Option<Fl> {
        match v {
            Value::Number(n) => Some(Fl::new(n.as_f64()?)),
            Value::String(s) => {
                if let Some(r) = Rat::parse(s) {
                    return Some(Fl::new(Scalar::to_f64(&r)));
                }
                s.parse::<f64>().ok().map(Fl::new)
            }
            _ => None,
        }
    }
}

/// True when any bare JSON number occurs in the value tree (which forces
/// the floating backend for the whole invocation).
pub fn contains_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_i64() && !n.is_u64(),
        Value::Array(a) => a.iter().any(contains_float),
        Value::Object(o) => o.values().any(contains_float),
        _ => false,
    }
}

pub fn mat3_to_json<S: JsonScalar>(m: &crate::kernel::Mat3<S>) -> Value {
    Value::Array(
        (0..3)
            .map(|i| Value::Array((0..3).map(|j| m.m[i][j].to_json_value()).collect()))
            .collect(),
    )
}

pub fn mat3_from_json<S: JsonScalar>(v: &Value) -> Option<crate::kernel::Mat3<S>> {
    let rows = v.as_array()?;
    if rows.len() != 3 {
        return None;
    }
    let mut out = crate::kernel::Mat3::zero();
    for (i, row) in rows.iter().enumerate() {
        let cells = row.as_array()?;
        if cells.len() != 3 {
            return None;
        }
        for (j, c) in cells.iter().enumerate() {
            out.m[i][j] = S::from_json_value(c)?;
        }
    }
    Some(out)
}
