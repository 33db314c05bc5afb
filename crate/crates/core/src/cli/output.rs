use serde_json::{json, Value as Json};

use super::config::OutputFormat;
use super::run::{Report, RunError, Value};

fn cell(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(x) => float(*x),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
    }
}

// Shortest round-trip digits; exponent form keeps tiny and huge values readable.
fn float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn json_cell(v: &Value) -> Json {
    match v {
        Value::Int(i) => json!(i),
        Value::Float(x) => json!(x),
        Value::Bool(b) => json!(b),
        Value::Text(s) => json!(s),
    }
}

/// CSV with a `#`-prefixed header block: version line, echoed config and
/// derived constants.
pub fn render_csv(report: &Report) -> String {
    let mut out = format!("# {}\n", report.version);
    for line in &report.config {
        out.push_str(&format!("# config: {line}\n"));
    }
    for (name, v) in &report.derived {
        out.push_str(&format!("# derived: {name} = {}\n", cell(v)));
    }
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for row in &report.rows {
        out.push_str(&row.iter().map(cell).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(report: &Report) -> String {
    let doc = json!({
        "version": report.version,
        "config": report.config,
        "derived": report
            .derived
            .iter()
            .map(|(name, v)| json!({ "name": name, "value": json_cell(v) }))
            .collect::<Vec<_>>(),
        "columns": report.columns,
        "rows": report
            .rows
            .iter()
            .map(|r| r.iter().map(json_cell).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report),
    }
}

/// Machine-readable error record.
pub fn error_record(module: &str, operation: &str, message: &str) -> String {
    json!({ "error": { "module": module, "operation": operation, "message": message } }).to_string()
}

pub fn run_error_record(e: &RunError) -> String {
    error_record(e.module, e.operation, &e.source.to_string())
}
