//! Report data model and the text / JSON / CSV renderers.
//!
//! Floats are rounded to 12 significant digits before rendering so that
//! output is stable across platforms' last-bit differences.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Floats(Vec<f64>),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl From<Vec<f64>> for Cell {
    fn from(v: Vec<f64>) -> Self {
        Cell::Floats(v)
    }
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{}", sig12(x))
    } else {
        format!("{x}")
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => {
                serde_json::Number::from_f64(sig12(*v)).map_or(Value::Null, Value::Number)
            }
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Floats(v) => Value::Array(v.iter().map(|&x| Cell::Float(x).to_json()).collect()),
            Cell::Null => Value::Null,
        }
    }

    fn to_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Floats(v) => v
                .iter()
                .map(|&x| float_text(x))
                .collect::<Vec<_>>()
                .join(";"),
            Cell::Null => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, headers: &[&'static str]) -> Self {
        Self {
            name,
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// What is needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: &'static str,
    pub command_line: String,
    pub seed: Option<u64>,
    pub backend: Option<&'static str>,
}

pub const TOOL: &str = "partial-search";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub summary: Vec<(&'static str, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(meta: Meta) -> Self {
        Self {
            meta,
            summary: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text().into_bytes(),
        }
    }

    fn meta_pairs(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("tool", TOOL.into()),
            ("version", VERSION.into()),
            ("command", self.meta.command.into()),
            ("command_line", self.meta.command_line.clone().into()),
            ("seed", self.meta.seed.into()),
            ("backend", self.meta.backend.into()),
        ]
    }

    pub fn to_json(&self) -> Vec<u8> {
        let meta: Map<String, Value> = self
            .meta_pairs()
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v.to_json()))
            .collect();
        let mut result: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| ((*k).to_owned(), v.to_json()))
            .collect();
        for table in &self.tables {
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    Value::Object(
                        table
                            .headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| ((*h).to_owned(), c.to_json()))
                            .collect(),
                    )
                })
                .collect();
            result.insert(table.name.to_owned(), Value::Array(rows));
        }
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("result".into(), Value::Object(result));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).expect("serializable");
        out.push(b'\n');
        out
    }

    /// The first table as CSV, preceded by `#` metadata lines. Reports
    /// without tables render their summary as `key,value` rows.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (k, v) in self.meta_pairs() {
            // keep the metadata on one line per key
            let value = v.to_text().replace(['\n', '\r'], " ");
            out.extend(format!("# {k}={value}\n").bytes());
        }
        let mut writer = csv::Writer::from_writer(out);
        match self.tables.first() {
            Some(table) => {
                writer
                    .write_record(&table.headers)
                    .expect("in-memory write");
                for row in &table.rows {
                    writer
                        .write_record(row.iter().map(Cell::to_text))
                        .expect("in-memory write");
                }
            }
            None => {
                writer
                    .write_record(["key", "value"])
                    .expect("in-memory write");
                for (k, v) in &self.summary {
                    writer
                        .write_record([*k, &v.to_text()])
                        .expect("in-memory write");
                }
            }
        }
        writer.into_inner().expect("in-memory flush")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{TOOL} {VERSION} :: {}", self.meta.command);
        let _ = writeln!(s, "command line: {}", self.meta.command_line);
        if let Some(seed) = self.meta.seed {
            let _ = writeln!(s, "seed: {seed}");
        }
        if let Some(backend) = self.meta.backend {
            let _ = writeln!(s, "backend: {backend}");
        }
        if !self.summary.is_empty() {
            s.push('\n');
            let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.summary {
                let _ = writeln!(s, "{k:<width$}  {}", v.to_text());
            }
        }
        for table in &self.tables {
            let _ = write!(s, "\n[{}]\n{}", table.name, aligned(table));
        }
        s
    }
}

fn aligned(table: &Table) -> String {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Cell::to_text).collect())
        .collect();
    let widths: Vec<usize> = table
        .headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    let line = |s: &mut String, items: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = items
            .zip(&widths)
            .map(|(item, &w)| format!("{item:>w$}"))
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&mut s, &mut table.headers.iter().copied());
    for row in &cells {
        line(&mut s, &mut row.iter().map(String::as_str));
    }
    s
}
