//! Table rendering for the three output formats.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Fixed-point with `precision` decimals, switching to scientific notation
/// for non-zero magnitudes that would otherwise print as all zeros.
pub fn format_number(v: f64, precision: usize) -> String {
    let threshold = 10f64.powi(-(precision.min(300) as i32));
    if v != 0.0 && v.abs() < threshold {
        format!("{v:.precision$e}")
    } else {
        format!("{v:.precision$}")
    }
}

/// Rows of named columns. `single` tables render as one JSON object instead
/// of an array.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single: bool,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            single: false,
        }
    }

    pub fn single(columns: Vec<&'static str>, row: Vec<Cell>) -> Self {
        Self {
            columns,
            rows: vec![row],
            single: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn has_non_finite(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .any(|c| matches!(c, Cell::Num(v) if !v.is_finite()))
    }

    fn text(cell: &Cell, precision: usize, missing: &str) -> String {
        match cell {
            Cell::Num(v) => format_number(*v, precision),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => missing.to_string(),
        }
    }

    pub fn json_value(&self, precision: usize) -> Value {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    m.insert((*name).to_string(), json_cell(cell, precision));
                }
                Value::Object(m)
            })
            .collect();
        if self.single && objects.len() == 1 {
            objects.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objects)
        }
    }

    pub fn render(&self, out: &mut dyn Write, format: Format, precision: usize) -> io::Result<()> {
        match format {
            Format::Json => {
                let v = self.json_value(precision);
                writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(io::Error::other)?)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| Self::text(c, precision, "")))?;
                }
                w.flush()
            }
            Format::Table => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|c| Self::text(c, precision, "n/a")).collect())
                    .collect();
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, h)| cells.iter().map(|r| r[i].len()).fold(h.len(), usize::max))
                    .collect();
                let line = |fields: Vec<&str>| -> String {
                    fields
                        .iter()
                        .zip(&widths)
                        .map(|(f, w)| format!("{f:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                writeln!(out, "{}", line(self.columns.clone()))?;
                for r in &cells {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
                Ok(())
            }
        }
    }
}

pub fn json_cell(cell: &Cell, precision: usize) -> Value {
    match cell {
        Cell::Num(v) => round_json(*v, precision),
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.clone()),
        Cell::Missing => Value::Null,
    }
}

/// A JSON number carrying the same digits the text formats print.
pub fn round_json(v: f64, precision: usize) -> Value {
    format_number(v, precision)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}
