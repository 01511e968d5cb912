//! Deterministic JSON emission: 12 significant digits, insertion-ordered keys.

use cyclogon_core::C64;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "cyclogon/1";

/// Rounds to 12 significant digits. Non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // fold -0.0 so that sign noise on zero cannot change the bytes
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn nums(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

/// A computed complex number, tagged so it is never mistaken for a constant
/// copied from elsewhere.
pub fn complex(z: C64) -> Value {
    json!({
        "re": num(z.re),
        "im": num(z.im),
        "abs": num(z.norm()),
        "source": "computed",
    })
}

/// A computed real quantity with its provenance tag.
pub fn computed(x: f64) -> Value {
    json!({ "value": num(x), "source": "computed" })
}

/// Top-level envelope shared by every report.
pub fn envelope(command: &str, tol: f64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert(
        "tool".into(),
        json!({ "name": "cyclogon", "version": env!("CARGO_PKG_VERSION") }),
    );
    m.insert("command".into(), json!(command));
    m.insert("tolerance".into(), num(tol));
    m
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values are serializable");
    s.push('\n');
    s
}

/// One `path = value` line per leaf, in document order.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    flatten("", value, &mut out);
    out
}

fn flatten(path: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(&p, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), v, out);
            }
        }
        leaf => {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
    }
}
