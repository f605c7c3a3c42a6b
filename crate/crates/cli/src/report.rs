//! Deterministic report serialization.

use std::collections::BTreeMap;

use hardwall::QuadratureConfig;
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL_VERSION: &str = concat!("hardwall ", env!("CARGO_PKG_VERSION"));

/// A float rounded to 15 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
        json!(rounded)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// CSV cell for a float, matching the JSON rounding.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: Value,
    pub tool_version: &'static str,
    pub tolerances: Value,
}

impl Report {
    pub fn new(
        command: &str,
        inputs: BTreeMap<String, Value>,
        outputs: Value,
        cfg: &QuadratureConfig,
    ) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            outputs,
            tool_version: TOOL_VERSION,
            tolerances: json!({
                "abs_tol": num(cfg.abs_tol),
                "max_subdivisions": cfg.max_subdivisions,
                "rel_tol": num(cfg.rel_tol),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        // serde_json maps are ordered by key, so the output is stable
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

/// Header plus rows, comma separated.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Two-column `key,value` table from a flat JSON object.
    pub fn from_object(value: &Value) -> Table {
        let rows = value
            .as_object()
            .map(|m| {
                m.iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        vec![k.clone(), v]
                    })
                    .collect()
            })
            .unwrap_or_default();
        Table {
            header: vec!["key", "value"],
            rows,
        }
    }
}

pub fn error_json(code: &str, message: &str) -> String {
    let value = json!({ "error": { "code": code, "message": message } });
    serde_json::to_string_pretty(&value).expect("error serializes")
}
