//! JSON and CSV emission.
//!
//! JSON objects use sorted keys and every enclosure is written as exact
//! outward-rounded decimal strings, so identical inputs give identical
//! bytes.

use std::io::Write;
use std::path::Path;

use betakit_core::{Interval, Verdict};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "betakit/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// The output of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, fields: Map::new(), table: None }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.fields.clone();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.into());
        Value::Object(m)
    }
}

/// `{lo, hi, bits}` with outward-rounded decimal strings.
pub fn interval(x: &Interval) -> Value {
    let (lo, hi) = x.decimal_bounds();
    json!({ "lo": lo, "hi": hi, "bits": x.prec() })
}

/// An exact rational as `"p/q"` (or `"p"`).
pub fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn verdict(v: Verdict) -> Value {
    Value::String(
        match v {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undetermined => "undetermined",
        }
        .into(),
    )
}

pub fn word(w: &[u32]) -> Value {
    Value::Array(w.iter().map(|&d| d.into()).collect())
}

pub fn word_text(w: &[u32]) -> String {
    w.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Writes the report to `out` (stdout when `None`).
pub fn emit_report(report: &Report, format: Format, out: Option<&Path>) -> CliResult<()> {
    let bytes = render(report, format)?;
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn render(report: &Report, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json())?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| CliError::usage(format!("`{}` has no CSV form", report.command)))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.headers)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
    }
}
