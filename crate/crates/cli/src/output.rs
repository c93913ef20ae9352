use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// `v` rounded to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal form of `round12(v)`.
pub fn fmt12(v: f64) -> String {
    let r = round12(v);
    if r.is_finite() {
        format!("{r}")
    } else if r.is_nan() {
        "NaN".into()
    } else if r > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|f| serde_json::Number::from_f64(round12(f))) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// One line of the JSONL results store.
#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub config_hash: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub experiment: String,
    pub version: String,
    pub config: Value,
    pub payload: Value,
}

impl ResultRecord {
    pub fn new(config_hash: String, experiment: &str, config: Value, payload: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ResultRecord {
            config_hash,
            timestamp,
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            payload,
        }
    }
}

pub fn append_record(path: &Path, record: &ResultRecord) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(record).map_err(io::Error::other)?;
    writeln!(f, "{line}")
}

pub fn write_json(path: &Path, v: &Value) -> io::Result<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
    s.push('\n');
    std::fs::write(path, s)
}

/// A row of the long-format metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub q: u64,
    pub kernel: String,
    pub metric: String,
    pub value: f64,
}

impl Metric {
    pub fn new(q: u64, kernel: &str, metric: impl Into<String>, value: f64) -> Self {
        Metric { q, kernel: kernel.to_string(), metric: metric.into(), value }
    }
}

pub fn write_metrics(path: &Path, rows: &[Metric]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(["q", "kernel", "metric", "value"])?;
    for r in rows {
        w.write_record([r.q.to_string(), r.kernel.clone(), r.metric.clone(), fmt12(r.value)])?;
    }
    w.flush()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Number(n) => {
            let s = match n.as_f64() {
                Some(f) if n.is_f64() => fmt12(f),
                _ => n.to_string(),
            };
            out.push((prefix.to_string(), s));
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Writes serialized rows as a wide CSV; nested objects become dotted
/// columns, and the header is the union of keys in first-seen order.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> io::Result<()> {
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let v = serde_json::to_value(r).map_err(io::Error::other)?;
            let mut out = Vec::new();
            flatten("", &v, &mut out);
            Ok(out)
        })
        .collect::<io::Result<_>>()?;
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(&header)?;
    for row in &flat {
        let m: Map<String, Value> = row.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        w.write_record(header.iter().map(|h| m.get(h).and_then(Value::as_str).unwrap_or("")))?;
    }
    w.flush()
}
