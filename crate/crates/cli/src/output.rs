//! Tabular results and their CSV / JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
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

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Na,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Na, Into::into)
    }
}

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest text for `x` once rounded to 12 significant digits.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let y = round_sig(x);
    let a = y.abs();
    if a != 0.0 && !(1e-6..1e15).contains(&a) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

/// Rows with named columns. `single` results render as one JSON object
/// instead of an array.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single: bool,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            single: false,
        }
    }

    pub fn single(columns: &[&'static str], row: Vec<Cell>) -> Self {
        let mut t = Table::new(columns);
        t.push(row);
        t.single = true;
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("plain values");
                s.push('\n');
                s
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&format_num(*x)),
                    Cell::Int(x) => write!(out, "{x}").unwrap(),
                    Cell::Bool(b) => write!(out, "{b}").unwrap(),
                    Cell::Text(t) => out.push_str(&csv_text(t)),
                    Cell::Na => out.push_str("NA"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| ((*c).to_owned(), cell_json(cell)))
                    .collect();
                Value::Object(map)
            })
            .collect();
        if self.single && objects.len() == 1 {
            objects.into_iter().next().unwrap()
        } else {
            Value::Array(objects)
        }
    }
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        Cell::Num(x) => Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
        Cell::Int(x) => Value::from(*x),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(t) => Value::String(t.clone()),
        Cell::Na => Value::Null,
    }
}

fn csv_text(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_num(1.0), "1");
        assert_eq!(format_num(0.1 + 0.2), "0.3");
        assert_eq!(format_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_num(-0.4063757399599599), "-0.40637573996");
        assert_eq!(format_num(1.5e-9), "1.5e-9");
        assert_eq!(format_num(0.0), "0");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["eta", "h", "note"]);
        t.push(vec![0.5.into(), 5u32.into(), Cell::Na]);
        t.push(vec![0.25.into(), Cell::Na, "a,b".into()]);
        assert_eq!(t.to_csv(), "eta,h,note\n0.5,5,NA\n0.25,NA,\"a,b\"\n");
        let v = t.to_json();
        assert_eq!(v[0]["h"], 5);
        assert!(v[1]["h"].is_null());

        let s = Table::single(&["ratio"], vec![0.9309681234567891.into()]);
        assert_eq!(s.to_json()["ratio"], 0.930968123457);
    }
}
