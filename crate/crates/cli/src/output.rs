use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{Map, Value};

use cvsteer::entropy::fmt_sig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular table with typed cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let m: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// Flattens nested objects into `a.b.c` keys for CSV output.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Number(n) if n.is_f64() => out.push((prefix.to_string(), fmt_sig(n.as_f64().unwrap_or(f64::NAN)))),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Self { path }
    }

    fn with_writer<F: FnOnce(&mut dyn Write) -> io::Result<()>>(&self, f: F) -> io::Result<()> {
        match &self.path {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                f(&mut w)?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                f(&mut w)?;
                w.flush()
            }
        }
    }

    pub fn write_text(&self, s: &str) -> io::Result<()> {
        self.with_writer(|w| w.write_all(s.as_bytes()))
    }

    pub fn write_value(&self, v: &Value, format: Format) -> io::Result<()> {
        match format {
            Format::Json => self.with_writer(|w| {
                serde_json::to_writer_pretty(&mut *w, v)?;
                writeln!(w)
            }),
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", v, &mut rows);
                self.with_writer(|w| {
                    writeln!(w, "field,value")?;
                    for (k, x) in rows {
                        writeln!(w, "{k},{x}")?;
                    }
                    Ok(())
                })
            }
        }
    }

    pub fn write_table(&self, t: &Table, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => self.with_writer(|w| t.write_csv(w)),
            Format::Json => self.write_value(&t.to_json(), Format::Json),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_nested() {
        let v: Value = serde_json::from_str(r#"{"a":{"b":1.5,"c":[true,"x"]},"d":null}"#).unwrap();
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        let keys: Vec<&str> = out.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["a.b", "a.c.0", "a.c.1", "d"]);
        assert_eq!(out[0].1, fmt_sig(1.5));
    }

    #[test]
    fn table_csv_and_json() {
        let mut t = Table::new(&["n", "x", "note"]);
        t.push(vec![Cell::Int(1), Cell::Num(0.5), Cell::Empty]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("n,x,note\n1,{},\n", fmt_sig(0.5)));
        assert_eq!(t.to_json()[0]["note"], Value::Null);
    }
}
