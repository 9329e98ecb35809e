//! Tabular output: CSV with `#` comment headers, or JSON mirroring the same
//! rows. Numbers are written with a fixed number of significant digits so
//! repeated runs are byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
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

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `#` lines written after the config header.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { name: name.into(), columns: columns.to_vec(), rows: vec![], notes: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width mismatch in {}", self.name);
        self.rows.push(row);
    }
}

/// `x` with `digits` significant digits in scientific notation.
pub fn format_number(x: f64, digits: usize) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.*e}", digits.saturating_sub(1), x)
    }
}

fn render_cell(cell: &Cell, digits: usize) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Num(x) => format_number(*x, digits),
        Cell::Text(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
    }
}

fn json_cell(cell: &Cell, digits: usize) -> Value {
    match cell {
        Cell::Int(i) => Value::from(*i),
        Cell::Num(x) => format_number(*x, digits)
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Cell::Text(s) => Value::from(s.clone()),
    }
}

pub fn render_csv(table: &Table, header: &[String], digits: usize) -> String {
    let mut out = String::new();
    for line in header.iter().chain(&table.notes) {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| render_cell(c, digits)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(table: &Table, config: &Value, digits: usize) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (col, cell) in table.columns.iter().zip(row) {
                obj.insert((*col).to_string(), json_cell(cell, digits));
            }
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("config".into(), config.clone());
    doc.insert("notes".into(), Value::from(table.notes.clone()));
    doc.insert("columns".into(), Value::from(table.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    doc.insert("rows".into(), Value::Array(rows));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serialization");
    text.push('\n');
    text
}

/// Writes `table` into `dir` as `<name>.csv` or `<name>.json`.
pub fn write_table(dir: &Path, table: &Table, config: &Value, format: Format, digits: usize) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (path, text) = match format {
        Format::Csv => {
            let header = vec![format!("config: {}", serde_json::to_string(config).expect("json serialization"))];
            (dir.join(format!("{}.csv", table.name)), render_csv(table, &header, digits))
        }
        Format::Json => (dir.join(format!("{}.json", table.name)), render_json(table, config, digits)),
    };
    fs::write(&path, text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["id", "x", "label"]);
        t.push(vec![1usize.into(), 0.1.into(), "saddle".into()]);
        t.push(vec![2usize.into(), (-2.5e-12).into(), "a,b".into()]);
        t.notes.push("identically zero".into());
        t
    }

    #[test]
    fn numbers_use_fixed_significant_digits() {
        assert_eq!(format_number(1.6, 3), "1.60e0");
        assert_eq!(format_number(-0.000123456, 2), "-1.2e-4");
        assert_eq!(format_number(f64::NAN, 5), "nan");
    }

    #[test]
    fn csv_layout() {
        let text = render_csv(&sample(), &["config: {}".to_string()], 4);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# config: {}");
        assert_eq!(lines[1], "# identically zero");
        assert_eq!(lines[2], "id,x,label");
        assert_eq!(lines[3], "1,1.000e-1,saddle");
        assert_eq!(lines[4], "2,-2.500e-12,\"a,b\"");
    }

    #[test]
    fn json_mirrors_rows() {
        let text = render_json(&sample(), &serde_json::json!({"k": 1}), 4);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["config"]["k"], 1);
        assert_eq!(v["rows"][0]["label"], "saddle");
        assert_eq!(v["rows"][0]["x"], 0.1);
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    }
}
