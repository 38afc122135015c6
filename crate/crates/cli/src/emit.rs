//! Report rendering. JSON documents keep insertion order; every float is
//! written with 17 significant digits in both formats, NaN as null/empty.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Flag(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Unknown integers render as an empty cell.
impl From<Option<u64>> for Cell {
    fn from(x: Option<u64>) -> Self {
        x.map_or(Cell::Text(String::new()), Cell::Int)
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

/// A finished report: the JSON document and its CSV table.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(json: Value, columns: Vec<&'static str>) -> Self {
        Self {
            json,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn row(mut self, cells: Vec<Cell>) -> Self {
        self.rows.push(cells);
        self
    }

    pub fn render(&self, format: OutputFormat) -> io::Result<Vec<u8>> {
        match format {
            OutputFormat::Json => to_json(&self.json),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render))?;
                }
                w.into_inner().map_err(|e| e.into_error())
            }
        }
    }
}

struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn to_json(value: &Value) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    Ok(buf)
}

/// `f64` to a JSON value, NaN and infinities as null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits() {
        let g = 14.134725141734694;
        assert_eq!(fmt_f64(g), "1.4134725141734695e1");
        assert_eq!(fmt_f64(g).parse::<f64>().unwrap(), g);
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(f64::NAN), "");
        let v = json!({"b": num(1.0), "a": num(f64::NAN), "n": 3});
        assert_eq!(
            String::from_utf8(to_json(&v).unwrap()).unwrap(),
            "{\"b\":1.0000000000000000e0,\"a\":null,\"n\":3}\n"
        );
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = Report::new(json!({}), vec!["y", "label"])
            .row(vec![Cell::from(0.25), Cell::from("a,b")])
            .row(vec![Cell::from(3usize), Cell::from(true)]);
        let text = String::from_utf8(r.render(OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(text, "y,label\n2.5000000000000000e-1,\"a,b\"\n3,true\n");
        assert_eq!(
            r.render(OutputFormat::Csv).unwrap(),
            r.render(OutputFormat::Csv).unwrap()
        );
    }
}
