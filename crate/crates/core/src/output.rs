//! Tabular datasets, run manifests, and their CSV / JSON renderings.
//!
//! CSV output starts with `# key=value` comment lines (the manifest and any
//! notes) followed by one header row. JSON output is a single object
//! `{"manifest": ..., "result": ...}`. Floats use the shortest
//! representation that parses back to the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, ToleranceConfig};

pub const ARTIFACT_VERSION: &str = concat!("ergm-phase ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

/// Shortest round-trip decimal form of `x`.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

/// A fixed-column dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column, `None` for empty or text cells.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        match self.column(name) {
            Some(k) => self.rows.iter().map(|r| r[k].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out += &cells.join(",");
            out.push('\n');
        }
        out
    }

    /// Rows as JSON objects keyed by column name.
    pub fn to_records(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Everything needed to reproduce one output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub p: u32,
    pub q: u32,
    pub format: Format,
    pub params: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, spec: &ModelSpec, tol: &ToleranceConfig, format: Format) -> Self {
        let tolerances = [
            ("grid_points", tol.grid_points.to_string()),
            ("grid_margin", format_f64(tol.grid_margin)),
            ("root_tol", format_f64(tol.root_tol)),
            ("tie_tol", format_f64(tol.tie_tol)),
            ("bisection_cap", tol.bisection_cap.to_string()),
            ("surface_tol", format_f64(tol.surface_tol)),
            ("critical_tol", format_f64(tol.critical_tol)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        RunManifest {
            subcommand: subcommand.to_string(),
            version: ARTIFACT_VERSION.to_string(),
            p: spec.p(),
            q: spec.q(),
            format,
            params: BTreeMap::new(),
            tolerances,
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// `key=value` lines in a fixed order.
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("subcommand={}", self.subcommand),
            format!("version={}", self.version),
            format!("p={}", self.p),
            format!("q={}", self.q),
            format!("format={}", self.format.extension()),
        ];
        if let Some(seed) = self.seed {
            lines.push(format!("seed={seed}"));
        }
        lines.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        lines.extend(self.tolerances.iter().map(|(k, v)| format!("tol.{k}={v}")));
        lines
    }
}

/// The result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub manifest: RunManifest,
    /// Extra `key=value` lines, e.g. counts of failed grid points.
    pub notes: Vec<(String, String)>,
    pub table: Table,
    /// The JSON `result`; defaults to the table's records.
    pub record: Option<serde_json::Value>,
}

impl Report {
    pub fn new(manifest: RunManifest, table: Table) -> Self {
        Report {
            manifest,
            notes: Vec::new(),
            table,
            record: None,
        }
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn with_record<T: Serialize>(mut self, record: &T) -> Result<Self> {
        self.record = Some(serde_json::to_value(record).map_err(|e| Error::Io(e.to_string()))?);
        Ok(self)
    }

    pub fn render(&self) -> Result<String> {
        match self.manifest.format {
            Format::Csv => {
                let mut out = String::new();
                for line in self.manifest.header_lines() {
                    let _ = writeln!(out, "# {line}");
                }
                for (k, v) in &self.notes {
                    let _ = writeln!(out, "# {k}={v}");
                }
                Ok(out + &self.table.to_csv())
            }
            Format::Json => {
                let result = self.record.clone().unwrap_or_else(|| self.table.to_records());
                let mut doc = serde_json::json!({ "manifest": self.manifest, "result": result });
                if !self.notes.is_empty() {
                    let notes: BTreeMap<_, _> = self.notes.iter().cloned().collect();
                    doc["notes"] = serde_json::to_value(notes).map_err(|e| Error::Io(e.to_string()))?;
                }
                let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(format: Format) -> Report {
        let spec = ModelSpec::new(3, 5).unwrap();
        let m = RunManifest::new("demo", &spec, &ToleranceConfig::default(), format).param("beta", "0,0,0");
        let mut t = Table::new(&["x", "label", "maybe"]);
        t.push(vec![0.1.into(), "a".into(), Cell::Empty]);
        t.push(vec![1e-20.into(), "b".into(), 3usize.into()]);
        Report::new(m, t).note("failures", 0)
    }

    #[test]
    fn csv_layout() {
        let s = report(Format::Csv).render().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# subcommand=demo");
        assert!(lines.contains(&"# beta=0,0,0"));
        assert!(lines.contains(&"# tol.tie_tol=1e-9"));
        assert!(lines.contains(&"# failures=0"));
        let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(&lines[header..], ["x,label,maybe", "0.1,a,", "1e-20,b,3"]);
    }

    #[test]
    fn json_round_trip() {
        let s = report(Format::Json).render().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let m: RunManifest = serde_json::from_value(v["manifest"].clone()).unwrap();
        assert_eq!(m, report(Format::Json).manifest);
        assert_eq!(v["result"][1]["x"], 1e-20);
        assert!(v["result"][0]["maybe"].is_null());
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", s);
    }

    #[test]
    fn shortest_floats() {
        for x in [0.1, 1.0 / 3.0, 1e300, -2.5e-308, 5.0] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_f64(0.5), "0.5");
    }
}
