//! JSON output with numbers rounded to 12 significant digits.

use serde::Serialize;
use serde_json::Value;

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rounds every float in the tree; integers and strings are left alone.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    rounded(serde_json::to_value(x).expect("serializable"))
}

pub fn to_string<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(&to_value(x)).expect("serializable")
}
