//! Deterministic JSON report assembly. serde_json's default map is ordered
//! by key, so serialization is bit-stable; big integers are emitted as
//! decimal strings and exact rationals as {"num", "den"} string pairs.

use arborkit::places::Place;
use arborkit::rational::Rational;
use arborkit::RatFunc;
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

pub fn rational(r: &Rational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
    })
}

pub fn numeric(value: f64, eps: f64) -> Value {
    json!({ "value": value, "eps": eps })
}

pub fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

pub fn ratfunc(z: &RatFunc) -> Value {
    Value::String(z.to_string())
}

pub fn place(v: &Place) -> Value {
    Value::String(v.to_string())
}

/// Assemble the top-level report envelope.
pub fn envelope(command: &str, inputs: Value, results: Value, timings: Option<Value>) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    map.insert("command".into(), Value::String(command.into()));
    map.insert("inputs".into(), inputs);
    map.insert("results".into(), results);
    if let Some(t) = timings {
        map.insert("timings".into(), t);
    }
    Value::Object(map)
}

/// Structured error object printed to standard error.
pub fn error_object(code: &str, message: &str, detail: Option<Value>) -> Value {
    let mut inner = Map::new();
    inner.insert("code".into(), Value::String(code.into()));
    inner.insert("message".into(), Value::String(message.into()));
    if let Some(d) = detail {
        inner.insert("detail".into(), d);
    }
    json!({ "error": Value::Object(inner) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use arborkit::rational::rat_frac;

    #[test]
    fn rational_shape() {
        let v = rational(&rat_frac(-3, 4));
        assert_eq!(v.to_string(), r#"{"den":"4","num":"-3"}"#);
    }

    #[test]
    fn envelope_keys_sorted() {
        let v = envelope("wreath", json!({}), json!({"order": "81"}), None);
        assert_eq!(
            v.to_string(),
            r#"{"command":"wreath","inputs":{},"results":{"order":"81"},"schema_version":"1"}"#
        );
    }
}
