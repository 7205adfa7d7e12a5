//! Deterministic CSV tables with a unit-declaring comment line.
//!
//! Layout:
//!
//! ```text
//! # units: x=m, z=m, Bx=T, Bz=T, Bmod=T
//! x,z,Bx,Bz,Bmod
//! 1.000000000e-3,...
//! ```
//!
//! Numbers are always written as `{:.9e}` so identical inputs give identical
//! bytes.

use std::path::Path;

use crate::error::{Error, Result};

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        // avoid "-0.000000000e0"
        let v = if v == 0.0 { 0.0 } else { v };
        format!("{v:.9e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            Cell::Num(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Cell {
        match s.parse::<f64>() {
            Ok(v) => Cell::Num(v),
            Err(_) => Cell::Text(s.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns.iter().map(|(c, _)| c.to_string()).collect(),
            units: columns.iter().map(|(_, u)| u.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; text cells are skipped.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[i].as_f64()).collect()
    }

    pub fn render(&self) -> String {
        let units: Vec<String> = self
            .columns
            .iter()
            .zip(&self.units)
            .map(|(c, u)| format!("{c}={u}"))
            .collect();
        let mut out = format!("# units: {}\n", units.join(", ")).into_bytes();
        {
            let mut w = ::csv::WriterBuilder::new().terminator(::csv::Terminator::Any(b'\n')).from_writer(&mut out);
            w.write_record(&self.columns).expect("in-memory write");
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(out).expect("utf-8 input")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, message: &str| Error::Config {
            line,
            message: message.to_string(),
        };
        let (unit_line, body) = text.split_once('\n').ok_or_else(|| bad(1, "missing header"))?;
        let unit_spec = unit_line
            .strip_prefix("# units: ")
            .ok_or_else(|| bad(1, "missing `# units:` line"))?;
        let mut reader = ::csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| bad(2, &e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut units = Vec::with_capacity(columns.len());
        for (i, item) in unit_spec.split(", ").enumerate() {
            let (c, u) = item.split_once('=').ok_or_else(|| bad(1, "malformed unit entry"))?;
            if columns.get(i).map(String::as_str) != Some(c) {
                return Err(bad(1, "unit line does not match header"));
            }
            units.push(u.to_string());
        }
        if units.len() != columns.len() {
            return Err(bad(1, "unit line does not match header"));
        }
        let mut rows = Vec::new();
        for (k, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| bad(k + 3, &e.to_string()))?;
            rows.push(rec.iter().map(Cell::parse).collect());
        }
        Ok(Self { columns, units, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.000000000e0");
        assert_eq!(fmt_num(-0.0), "0.000000000e0");
        assert_eq!(fmt_num(1.234567891234e-7), "1.234567891e-7");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn layout() {
        let mut t = CsvTable::new(&[("x", "m"), ("tag", "-")]);
        t.push(vec![1.5.into(), "away".into()]);
        let s = t.render();
        assert_eq!(s, "# units: x=m, tag=-\nx,tag\n1.500000000e0,away\n");
        assert!(CsvTable::parse("x\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn render_parse_render_is_identity(vals in proptest::collection::vec(-1e12f64..1e12, 1..40)) {
            let mut t = CsvTable::new(&[("a", "T"), ("b", "m"), ("c", "-")]);
            for v in &vals {
                t.push(vec![(*v).into(), (v * 1e-9).into(), if *v > 0.0 { "up" } else { "down" }.into()]);
            }
            let s = t.render();
            let back = CsvTable::parse(&s).unwrap();
            prop_assert_eq!(&back.units, &t.units);
            prop_assert_eq!(back.render(), s);
        }
    }
}
