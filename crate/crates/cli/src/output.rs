use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Fixed six-decimal rendering, switching to exponent form for very small
/// or very large magnitudes. Non-finite values print as `NaN`/`inf`.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), num)
}

/// Plain aligned text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let width: Vec<usize> = (0..cols)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(j))
                    .chain(std::iter::once(&self.header[j]))
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row.iter().enumerate().map(|(j, c)| format!("{c:<w$}", w = width[j])).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }

    pub fn to_csv(&self) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| e.to_string())?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| e.to_string())?;
        }
        String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_rendering() {
        assert_eq!(num(1.5), "1.500000");
        assert_eq!(num(0.0), "0.000000");
        assert_eq!(num(1.2e-7), "1.200000e-7");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(opt_num(None), "-");
    }

    #[test]
    fn table_alignment_and_csv() {
        let mut t = Table::new(&["a", "bb"]);
        t.push(vec!["xyz".into(), "1".into()]);
        assert_eq!(t.render(), "a    bb\nxyz  1\n");
        t.push(vec!["with,comma".into(), "2".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,bb\nxyz,1\n\"with,comma\",2\n");
    }
}
