//! CSV and JSON writers. Floats are written with 17 significant digits and
//! every CSV starts with `#` lines echoing the parameters of the run.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Cell::Float(x) => float17(x),
            Cell::Int(i) => i.to_string(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Float(x) => Value::from(x),
            Cell::Int(i) => Value::from(i),
        }
    }
}

pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ordered `key = value` pairs describing a run.
#[derive(Debug, Clone, Default)]
pub struct Echo(Vec<(String, Value)>);

impl Echo {
    pub fn new(command: &str) -> Self {
        Self(vec![("command".into(), Value::from(command))])
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn push_opt(&mut self, key: &str, value: Option<impl Into<Value>>) -> &mut Self {
        if let Some(v) = value {
            self.push(key, v);
        }
        self
    }

    pub fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.0 {
            let v = match v {
                Value::String(text) => text.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().cloned().collect::<Map<_, _>>())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn check_finite(&self) -> Result<(), CliError> {
        for (i, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if let Cell::Float(x) = cell {
                    if !x.is_finite() {
                        return Err(CliError::Failure(format!("row {i}: {} is not finite ({x})", self.columns[c])));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self, echo: &Echo) -> Result<String, CliError> {
        self.check_finite()?;
        let mut s = echo.header();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        Ok(s)
    }

    pub fn to_json(&self, echo: &Echo) -> Result<String, CliError> {
        self.check_finite()?;
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(|c| c.json())).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("parameters".into(), echo.to_json());
        doc.insert("rows".into(), Value::Array(rows));
        json_string(&Value::Object(doc))
    }

    pub fn render(&self, echo: &Echo, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(echo),
            Format::Json => self.to_json(echo),
        }
    }
}

pub fn json_string(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Failure(format!("json encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = float17(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        let x = std::f64::consts::PI * 1e-7;
        assert_eq!(float17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn csv_layout() {
        let t = Table { columns: vec!["a".into(), "b".into()], rows: vec![vec![Cell::Int(3), Cell::Float(0.5)]] };
        let mut e = Echo::new("demo");
        e.push("n", 3);
        let csv = t.to_csv(&e).unwrap();
        assert_eq!(csv, "# command = demo\n# n = 3\na,b\n3,5.0000000000000000e-1\n");
    }

    #[test]
    fn non_finite_cells_are_failures() {
        let t = Table { columns: vec!["a".into()], rows: vec![vec![Cell::Float(f64::NAN)]] };
        assert!(matches!(t.to_csv(&Echo::default()), Err(CliError::Failure(_))));
    }
}
