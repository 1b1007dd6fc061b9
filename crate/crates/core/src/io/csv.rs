//! CSV emission with 17-significant-digit decimals.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

/// Formats like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        trim(&format!("{:.*}", (16 - exp) as usize, x))
    }
}

/// Header plus rows, checked for shape and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Serializes to bytes; refuses non-finite numbers and ragged rows.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Config(format!("csv serialization failed: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            if row.len() != self.header.len() {
                return Err(Error::Domain(format!(
                    "row has {} fields, header has {}",
                    row.len(),
                    self.header.len()
                )));
            }
            let fields = row
                .iter()
                .zip(&self.header)
                .map(|(c, name)| match c {
                    Cell::Real(v) if !v.is_finite() => Err(Error::NonFinite { column: name.clone() }),
                    Cell::Real(v) => Ok(format_g17(*v)),
                    Cell::Int(v) => Ok(v.to_string()),
                    Cell::Text(s) => Ok(s.clone()),
                    Cell::Empty => Ok(String::new()),
                })
                .collect::<Result<Vec<String>>>()?;
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Config(format!("csv serialization failed: {e}")))
    }
}

/// Writes `table` to `path` as UTF-8 with LF line endings.
pub fn emit_csv(table: &CsvTable, path: &Path) -> Result<()> {
    let bytes = table.to_bytes()?;
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(0.0), "0");
    }

    #[test]
    fn header_only_and_one_row() {
        let t = CsvTable::new(&["a", "b"]);
        assert_eq!(t.to_bytes().unwrap(), b"a,b\n");
        let mut t = CsvTable::new(&["re_lambda", "im_lambda", "re_s", "im_s", "multiplicity"]);
        t.push(vec![3.0.into(), (-0.25).into(), 0.25.into(), (-3.0).into(), 2i64.into()]);
        let s = String::from_utf8(t.to_bytes().unwrap()).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 5);
    }

    #[test]
    fn refuses_nan() {
        let mut t = CsvTable::new(&["x"]);
        t.push(vec![f64::NAN.into()]);
        assert!(matches!(t.to_bytes(), Err(Error::NonFinite { .. })));
        let mut t = CsvTable::new(&["x", "y"]);
        t.push(vec![1.0.into()]);
        assert!(t.to_bytes().is_err());
    }

    #[test]
    fn quoting() {
        let mut t = CsvTable::new(&["id"]);
        t.push(vec!["three_funnel(7,7,7)".into()]);
        assert_eq!(t.to_bytes().unwrap(), b"id\n\"three_funnel(7,7,7)\"\n");
    }

    proptest! {
        #[test]
        fn g17_round_trips(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
