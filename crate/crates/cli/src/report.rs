use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use truncbin_core::ScanReport;

/// One report per invocation; big integers are always decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub timing_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn json(envelope: &ReportEnvelope) -> String {
    let mut s = serde_json::to_string_pretty(envelope).expect("envelope serializes");
    s.push('\n');
    s
}

pub fn witnesses_csv(report: &ScanReport) -> String {
    let mut out = String::from("n,k,a_res,b_res\n");
    for (a, b) in &report.witnesses {
        let _ = writeln!(out, "{},{},{a},{b}", report.n, report.power_k);
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let joined: Vec<String> = items.iter().map(|i| match i {
                Value::Array(inner) => format!("({})", inner.iter().map(scalar).collect::<Vec<_>>().join(", ")),
                other => scalar(other),
            }).collect();
            out.push((prefix.to_string(), format!("[{}]", joined.join(", "))));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// `key: value` lines for a human reader.
pub fn text(envelope: &ReportEnvelope) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", envelope.command);
    for (k, v) in &envelope.inputs {
        let _ = writeln!(out, "input.{k}: {v}");
    }
    let mut rows = Vec::new();
    flatten("", &envelope.result, &mut rows);
    for (k, v) in rows {
        let _ = writeln!(out, "{k}: {v}");
    }
    let _ = writeln!(out, "timing_ms: {:.3}", envelope.timing_ms);
    out
}
