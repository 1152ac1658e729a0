use serde_json::{Map, Value};

use crate::job::{OutputFormat, Report};

pub fn emit(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.body).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => {
            let mut s = match &report.body {
                Value::Object(m) => table(m),
                other => format!("{}\n", cell(other)),
            };
            for w in &report.warnings {
                s.push_str(&format!("warning: {w}\n"));
            }
            s
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn rows_of(v: &Value) -> Option<&Vec<Value>> {
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => Some(rows),
        _ => None,
    }
}

/// Scalar fields as aligned `key  value` lines, then each list of records as
/// a column table.
fn table(m: &Map<String, Value>) -> String {
    let mut out = String::new();
    let scalars: Vec<(&String, &Value)> = m.iter().filter(|(_, v)| rows_of(v).is_none()).collect();
    let width = scalars.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in &scalars {
        out.push_str(format!("{k:<width$}  {}", cell(v)).trim_end());
        out.push('\n');
    }
    for (k, v) in m {
        if let Some(rows) = rows_of(v) {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("{k}:\n"));
            out.push_str(&columns(rows));
        }
    }
    out
}

fn columns(rows: &[Value]) -> String {
    let mut headers: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().unwrap().keys() {
            if !headers.contains(k) {
                headers.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| headers.iter().map(|h| r.get(h).map(cell).unwrap_or_else(|| "-".into())).collect())
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| cells.iter().map(|c| c[i].chars().count()).chain([h.len()]).max().unwrap())
        .collect();
    let line = |items: &[String]| -> String {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&headers);
    for c in &cells {
        out.push_str(&line(c));
    }
    out
}
