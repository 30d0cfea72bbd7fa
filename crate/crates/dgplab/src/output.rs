//! CSV and JSON writers.
//!
//! CSV: header row, comma separator, `.` decimal point, scientific notation
//! for `|v| < 1e-4` or `|v| > 1e6`. A sign/log-magnitude column `name` is
//! written as the pair `name_sign,name_logmag`. JSON cannot hold non-finite
//! numbers, so those are written as the strings `"inf"`, `"-inf"`, `"nan"`.

use std::io::{self, Write};

use dgplab_core::montecarlo::{Column, ColumnData, FigureData};
use dgplab_core::SignedLog;
use serde_json::{json, Map, Value};

/// Build identifier baked in at compile time.
pub const GIT_DESCRIBE: &str = env!("DGPLAB_GIT_DESCRIBE");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a != 0.0 && !(1e-4..=1e6).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// A JSON number, or a string for non-finite values.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(format_number(v))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes columns of equal length as CSV.
pub fn write_columns_csv<W: Write + ?Sized>(columns: &[Column], w: &mut W) -> io::Result<()> {
    let mut header = Vec::new();
    for c in columns {
        match c.data {
            ColumnData::Real(_) => header.push(csv_field(&c.name)),
            ColumnData::Signed(_) => {
                header.push(csv_field(&format!("{}_sign", c.name)));
                header.push(csv_field(&format!("{}_logmag", c.name)));
            }
        }
    }
    writeln!(w, "{}", header.join(","))?;
    let rows = columns.first().map_or(0, |c| c.data.len());
    let mut line = String::new();
    for i in 0..rows {
        line.clear();
        for (k, c) in columns.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            match &c.data {
                ColumnData::Real(v) => line.push_str(&format_number(v[i])),
                ColumnData::Signed(v) => {
                    line.push_str(if v[i].sign().as_i8() < 0 { "-1" } else { "1" });
                    line.push(',');
                    line.push_str(&format_number(v[i].log_mag()));
                }
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

fn signed_json(v: &SignedLog) -> Value {
    json!({ "sign": v.sign().as_i8(), "logmag": num(v.log_mag()) })
}

/// Columns as a JSON object keyed by column name.
pub fn columns_json(columns: &[Column]) -> Value {
    let mut m = Map::new();
    for c in columns {
        let v = match &c.data {
            ColumnData::Real(v) => Value::Array(v.iter().map(|&x| num(x)).collect()),
            ColumnData::Signed(v) => Value::Array(v.iter().map(signed_json).collect()),
        };
        m.insert(c.name.clone(), v);
    }
    Value::Object(m)
}

/// Run metadata for series outputs.
pub fn meta_json(seed: u64, n: usize, params: &[(String, String)]) -> Value {
    let p: Map<String, Value> = params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    json!({ "seed": seed, "n": n, "params": p, "git_describe": GIT_DESCRIBE })
}

pub fn figure_json(fig: &FigureData) -> Value {
    json!({
        "figure_id": fig.id.as_str(),
        "columns": columns_json(&fig.columns),
        "meta": meta_json(fig.meta.seed, fig.meta.n, &fig.meta.params),
    })
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(&key, x, out);
            }
        }
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(scalar_text).collect();
            out.push((prefix.to_string(), parts.join(";")));
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(
            || n.to_string(),
            |f| {
                if n.is_f64() {
                    format_number(f)
                } else {
                    n.to_string()
                }
            },
        ),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens objects into CSV rows (nested keys joined with `.`, arrays with `;`).
/// An array of objects gives one row per element; anything else gives one row.
pub fn write_report_csv<W: Write + ?Sized>(v: &Value, w: &mut W) -> io::Result<()> {
    let rows: Vec<&Value> = match v {
        Value::Array(a) => a.iter().collect(),
        other => vec![other],
    };
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            flatten_into("", r, &mut out);
            out
        })
        .collect();
    if let Some(first) = flat.first() {
        let header: Vec<String> = first.iter().map(|(k, _)| csv_field(k)).collect();
        writeln!(w, "{}", header.join(","))?;
    }
    for row in &flat {
        let vals: Vec<String> = row.iter().map(|(_, v)| csv_field(v)).collect();
        writeln!(w, "{}", vals.join(","))?;
    }
    Ok(())
}

pub fn write_report<W: Write + ?Sized>(v: &Value, format: Format, w: &mut W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, v)?;
            writeln!(w)
        }
        Format::Csv => write_report_csv(v, w),
    }
}
