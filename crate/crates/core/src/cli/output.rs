use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Aligned text table.
    #[default]
    Table,
    /// One JSON record per line.
    Records,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        Format::from_str(s, true).map_err(|_| Error::invalid(format!("unknown format `{s}`")))
    }
}

/// One emitted result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub schema_version: u32,
    pub op: String,
    pub params: Value,
    pub result: Value,
    pub elapsed_ms: u64,
    pub version: String,
}

impl Record {
    pub fn new(op: &str, params: Value, result: Value, elapsed_ms: u64) -> Record {
        Record {
            schema_version: SCHEMA_VERSION,
            op: op.to_string(),
            params,
            result,
            elapsed_ms,
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Records => Ok(self.to_line() + "\n"),
            Format::Table => Ok(render_table(&self.result)),
            Format::Csv => render_csv(&self.result),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Columns and rows of a result: its `rows` array when present, else one row
/// of the top-level fields.
pub fn tabulate(result: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let objects: Vec<&serde_json::Map<String, Value>> = match result.get("rows") {
        Some(Value::Array(rows)) => rows.iter().filter_map(Value::as_object).collect(),
        _ => result.as_object().into_iter().collect(),
    };
    let mut columns: Vec<String> = Vec::new();
    for obj in &objects {
        for key in obj.keys() {
            if !columns.contains(key) {
                columns.push(key.clone());
            }
        }
    }
    let rows = objects
        .iter()
        .map(|obj| columns.iter().map(|c| obj.get(c).map(cell).unwrap_or_default()).collect())
        .collect();
    (columns, rows)
}

fn render_table(result: &Value) -> String {
    let (columns, rows) = tabulate(result);
    let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
    for row in &rows {
        for (w, v) in widths.iter_mut().zip(row) {
            *w = (*w).max(v.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (v, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = w - v.chars().count();
            let _ = write!(s, "{v}{}", " ".repeat(pad));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&columns);
    out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for row in &rows {
        out += &line(row);
    }
    out
}

fn render_csv(result: &Value) -> Result<String> {
    let (columns, rows) = tabulate(result);
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::invalid(e.to_string());
    w.write_record(&columns).map_err(to_err)?;
    for row in &rows {
        w.write_record(row).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn single_result_is_one_row() {
        let r = Record::new("count", json!({"n": 20}), json!({"n": 20, "m": 7, "count": "1234"}), 5);
        let table = r.render(Format::Table).unwrap();
        assert_eq!(table.lines().count(), 3);
        assert!(table.lines().next().unwrap().starts_with("n "));
        let csv = r.render(Format::Csv).unwrap();
        assert_eq!(csv, "n,m,count\n20,7,1234\n");
    }

    #[test]
    fn rows_become_table_lines() {
        let result = json!({"total": "3", "rows": [{"m": 0, "count": "1"}, {"m": 1, "count": "2", "note": "x,y"}]});
        let (cols, rows) = tabulate(&result);
        assert_eq!(cols, vec!["m", "count", "note"]);
        assert_eq!(rows[0], vec!["0", "1", ""]);
        let csv = Record::new("x", json!({}), result, 0).render(Format::Csv).unwrap();
        assert!(csv.ends_with("1,2,\"x,y\"\n"));
    }

    #[test]
    fn records_round_trip() {
        let r = Record::new("partitions", json!({"k": 8, "ell": 3}), json!({"count": "2"}), 0);
        let back: Record = serde_json::from_str(&r.to_line()).unwrap();
        assert_eq!(back, r);
    }
}
