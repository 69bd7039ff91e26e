//! CSV and JSON writers. Numbers in CSV carry 12 significant digits; JSON
//! keeps full f64 precision so parameter echoes round-trip.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{CliError, Format};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// 12 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError {
        code: 1,
        message: format!("io: {e}"),
    }
}

/// Header plus rows. JSON wraps them as `{"parameters": …, "rows": [{col: v}]}`.
pub fn write_table(
    out: &mut dyn Write,
    format: Format,
    parameters: &impl Serialize,
    columns: &[String],
    rows: &[Vec<Cell>],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(columns).map_err(csv_error)?;
            for row in rows {
                w.write_record(row.iter().map(Cell::csv_field)).map_err(csv_error)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| serde_json::to_value(c).unwrap_or(Value::Null)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({ "parameters": parameters, "rows": rows });
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

pub fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError {
        code: 1,
        message: format!("io: {e}"),
    })?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Divide the given columns by the largest magnitude found in any of them.
pub fn normalize_max(rows: &mut [Vec<Cell>], cols: &[usize]) {
    let peak = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |&c| &r[c]))
        .filter_map(|c| match c {
            Cell::Num(v) => Some(v.abs()),
            Cell::Text(_) => None,
        })
        .fold(0.0f64, f64::max);
    if peak > 0.0 {
        for r in rows.iter_mut() {
            for &c in cols {
                if let Cell::Num(v) = &mut r[c] {
                    *v /= peak;
                }
            }
        }
    }
}
