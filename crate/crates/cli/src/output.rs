//! Report rendering: aligned text, flat CSV, and versioned JSON.
//!
//! Every number is printed with six significant digits. JSON values are
//! rounded the same way so that text and JSON agree.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Bumped whenever a report changes shape incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("expected csv, json or text, got `{s}`")),
        }
    }
}

/// `x` rounded to six significant digits.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

/// `x` formatted with six significant digits.
pub fn sig6(x: f64) -> String {
    unit_lindley::montecarlo::format_sig(x, 6)
}

/// Recursively rounds every float in a JSON value.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round6).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_json),
        Value::Object(m) => m.values_mut().for_each(round_json),
        _ => {}
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (_, Some(i)) => i.to_string(),
            _ => sig6(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.is_empty() => String::new(),
        Value::Array(xs) => {
            let parts: Vec<String> = xs.iter().map(scalar_text).collect();
            format!("({})", parts.join(", "))
        }
        Value::Object(_) => unreachable!("objects are flattened"),
    }
}

/// Flattens nested objects into dotted keys, preserving field order.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

/// A command's result, ready to be rendered in any format.
pub struct Report {
    pub command: &'static str,
    body: Value,
}

impl Report {
    pub fn new<T: Serialize>(command: &'static str, body: &T) -> Result<Self> {
        let body = serde_json::to_value(body)
            .map_err(|e| CliError::Usage(format!("internal serialisation error: {e}")))?;
        Ok(Report { command, body })
    }

    fn envelope(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), Value::from("ulindley.report"));
        m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        m.insert("command".into(), Value::from(self.command));
        if let Value::Object(body) = &self.body {
            m.extend(body.clone());
        } else {
            m.insert("result".into(), self.body.clone());
        }
        Value::Object(m)
    }

    fn fields(&self) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        flatten("", &self.body, &mut out);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut v = self.envelope();
                round_json(&mut v);
                let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialise");
                s.push('\n');
                s
            }
            Format::Csv => {
                let fields = self.fields();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(fields.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
                w.write_record(fields.iter().map(|(_, v)| scalar_text(v))).expect("in-memory write");
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Text => {
                let fields: Vec<(String, Value)> =
                    self.fields().into_iter().filter(|(_, v)| !v.is_null()).collect();
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut s = String::new();
                for (k, v) in fields {
                    let _ = writeln!(s, "{k:<width$}  {}", scalar_text(&v));
                }
                s
            }
        }
    }
}
