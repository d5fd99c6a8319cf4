//! CSV and JSON rendering of command results.
//!
//! Both formats carry the same metadata block: tool name and version, schema
//! version, the subcommand and every resolved parameter (seed included), and
//! optionally the generation time. In CSV the metadata is a run of
//! `# key: value` lines ahead of the header row; in JSON it is the
//! `metadata` member of the top-level object, next to `rows` or `report`.
//!
//! Reals are printed in CSV as `{:.16e}` (17 significant digits) and in JSON
//! as the shortest representation that round-trips.

use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL: &str = "mbk";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Text(s) => csv_escape(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        i64::try_from(i).map_or_else(|_| Cell::Text(i.to_string()), Cell::Int)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::from(i as u64)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Ordered `(name, value)` pairs.
pub type Fields = Vec<(&'static str, Cell)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra row appended after the data in CSV, and emitted as `summary`
    /// in JSON.
    pub summary: Option<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Rows(Table),
    Report(Fields),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub command: &'static str,
    pub parameters: Fields,
    pub generated_unix: Option<u64>,
    pub body: Body,
}

impl Envelope {
    pub fn new(command: &'static str, parameters: Fields, body: Body) -> Self {
        Envelope {
            command,
            parameters,
            generated_unix: None,
            body,
        }
    }

    /// Stamps the current time unless `omit` is set.
    pub fn timestamped(mut self, omit: bool) -> Self {
        if !omit {
            self.generated_unix = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn metadata_pairs(&self) -> Vec<(&'static str, Cell)> {
        let mut pairs = vec![
            ("tool", Cell::from(TOOL)),
            ("version", Cell::from(env!("CARGO_PKG_VERSION"))),
            ("schema_version", Cell::from(SCHEMA_VERSION)),
            ("command", Cell::from(self.command)),
        ];
        if let Some(t) = self.generated_unix {
            pairs.push(("generated_unix", Cell::from(t)));
        }
        pairs
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.metadata_pairs() {
            out.push_str(&format!("# {k}: {}\n", v.csv()));
        }
        for (k, v) in &self.parameters {
            out.push_str(&format!("# parameter.{k}: {}\n", v.csv()));
        }
        let mut line = |cells: &[Cell]| {
            let joined: Vec<String> = cells.iter().map(Cell::csv).collect();
            out.push_str(&joined.join(","));
            out.push('\n');
        };
        match &self.body {
            Body::Rows(table) => {
                let header: Vec<Cell> = table.columns.iter().map(|c| Cell::from(*c)).collect();
                line(&header);
                for row in &table.rows {
                    line(row);
                }
                if let Some(summary) = &table.summary {
                    line(summary);
                }
            }
            Body::Report(fields) => {
                let header: Vec<Cell> = fields.iter().map(|(k, _)| Cell::from(*k)).collect();
                let values: Vec<Cell> = fields.iter().map(|(_, v)| v.clone()).collect();
                line(&header);
                line(&values);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut metadata: Map<String, Value> = self
            .metadata_pairs()
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v.json()))
            .collect();
        metadata.insert("parameters".to_owned(), Value::Object(object(&self.parameters)));

        let mut top = Map::new();
        top.insert("metadata".to_owned(), Value::Object(metadata));
        match &self.body {
            Body::Rows(table) => {
                let row_object = |row: &[Cell]| -> Value {
                    Value::Object(table.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect())
                };
                let rows = table.rows.iter().map(|r| row_object(r)).collect();
                top.insert("rows".to_owned(), Value::Array(rows));
                if let Some(summary) = &table.summary {
                    top.insert("summary".to_owned(), row_object(summary));
                }
            }
            Body::Report(fields) => {
                top.insert("report".to_owned(), Value::Object(object(fields)));
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values are finite or null");
        text.push('\n');
        text
    }
}

fn object(fields: &Fields) -> Map<String, Value> {
    fields.iter().map(|(k, v)| ((*k).to_owned(), v.json())).collect()
}

/// Writes `text` to `path` atomically: a temporary file in the same
/// directory is filled and then renamed, so a failure never leaves a partial
/// file behind.
pub fn write_file(path: &Path, text: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
