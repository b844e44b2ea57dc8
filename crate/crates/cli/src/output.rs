use std::io::Write;

use serde_json::{Map, Value};
use sgo_core::rational::{to_decimal, DECIMAL_DIGITS};
use sgo_core::Rational;

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "simplex-grid-opt v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Bool(bool),
    Empty,
    /// Rational points; CSV joins coordinates with `,` and points with `;`.
    Points(Vec<Vec<String>>),
}

impl Cell {
    pub fn rational(q: &Rational) -> Cell {
        Cell::Text(q.to_string())
    }

    pub fn decimal(q: &Rational) -> Cell {
        Cell::Text(to_decimal(q, DECIMAL_DIGITS))
    }

    pub fn opt_rational(q: Option<&Rational>) -> Cell {
        q.map_or(Cell::Empty, Cell::rational)
    }

    pub fn int(v: impl Into<i128>) -> Cell {
        Cell::Int(v.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
            Cell::Points(ps) => ps.iter().map(|p| p.join(",")).collect::<Vec<_>>().join(";"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(small) => Value::from(small),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
            Cell::Points(ps) => Value::Array(
                ps.iter()
                    .map(|p| Value::Array(p.iter().cloned().map(Value::String).collect()))
                    .collect(),
            ),
        }
    }
}

/// Command output: metadata, column names and rows.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// In JSON, print a single row as a flat object instead of a `results` list.
    pub flatten_single: bool,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Table {
            command,
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            flatten_single: false,
        }
    }

    pub fn meta(&mut self, key: &str, value: Cell) {
        self.meta.push((key.to_string(), value));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        writeln!(out, "# {FORMAT_VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {}", v.csv())?;
        }
        if self.columns.iter().any(|c| c.ends_with("_decimal")) {
            writeln!(
                out,
                "# *_decimal columns are advisory ({DECIMAL_DIGITS} significant digits, round-half-even); exact values are the fractions"
            )?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    fn row_object(&self, row: &[Cell]) -> Map<String, Value> {
        self.columns
            .iter()
            .cloned()
            .zip(row.iter().map(Cell::json))
            .collect()
    }

    pub fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut obj = Map::new();
        obj.insert("format".into(), Value::from(FORMAT_VERSION));
        obj.insert("command".into(), Value::from(self.command));
        for (k, v) in &self.meta {
            obj.insert(k.clone(), v.json());
        }
        if self.flatten_single && self.rows.len() == 1 {
            obj.extend(self.row_object(&self.rows[0]));
        } else {
            let rows = self
                .rows
                .iter()
                .map(|r| Value::Object(self.row_object(r)))
                .collect();
            obj.insert("results".into(), Value::Array(rows));
        }
        serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))?;
        writeln!(out)?;
        Ok(())
    }
}
