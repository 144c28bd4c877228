//! Small helpers for the JSON file formats. Integers are written exactly,
//! however large.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Number, Value};
use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("expected {expected} at {path}")]
    Shape { expected: &'static str, path: String },
    #[error("invalid key {0:?}")]
    Key(String),
}

impl JsonError {
    pub(crate) fn shape(expected: &'static str, path: impl Into<String>) -> Self {
        JsonError::Shape {
            expected,
            path: path.into(),
        }
    }
}

pub fn int_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal is a JSON number"))
}

pub fn int_from_json(value: &Value, path: &str) -> Result<BigInt, JsonError> {
    match value {
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| JsonError::shape("an integer", path))
        }
        _ => Err(JsonError::shape("an integer", path)),
    }
}

pub(crate) fn str_from_json<'a>(value: &'a Value, path: &str) -> Result<&'a str, JsonError> {
    value.as_str().ok_or_else(|| JsonError::shape("a string", path))
}

pub(crate) fn array_from_json<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    value.as_array().ok_or_else(|| JsonError::shape("an array", path))
}

pub(crate) fn field<'a>(value: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    value
        .get(key)
        .ok_or_else(|| JsonError::shape("a required field", format!("{path}.{key}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_survive() {
        let n = BigInt::from_str("-123456789012345678901234567890").unwrap();
        let v = int_to_json(&n);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, "-123456789012345678901234567890");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(int_from_json(&back, "$").unwrap(), n);
    }

    #[test]
    fn floats_are_rejected() {
        let v: Value = serde_json::from_str("1.5").unwrap();
        assert!(int_from_json(&v, "$").is_err());
    }
}
