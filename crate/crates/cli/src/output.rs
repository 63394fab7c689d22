//! Report values and their JSON / CSV rendering.
//!
//! Every float is rounded to 12 significant digits before it is written, so
//! identical runs give byte-identical files.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of a rounded float for CSV cells.
pub fn fmt_num(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && r.is_finite() && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(round12(x)).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// A flat table for the CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Two-column `quantity,value` table.
    pub fn key_values(pairs: impl IntoIterator<Item = (String, String)>) -> Table {
        let mut t = Table::new(&["quantity", "value"]);
        for (k, v) in pairs {
            t.push(vec![k, v]);
        }
        t
    }
}

/// The outcome of one scenario.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// False when a tolerance check failed.
    pub ok: bool,
}

impl Report {
    pub fn new(json: impl Serialize, table: Table, ok: bool) -> Result<Report> {
        Ok(Report { json: serde_json::to_value(json)?, table, ok })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let rounded = round_value(report.json.clone());
            serde_json::to_writer_pretty(&mut *out, &rounded)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
