//! CSV rendering: a metadata comment line, a header, then rows.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{invalid, CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// `%.{digits}g`-style formatting; infinities become `inf` / `-inf`.
pub fn format_real(x: f64, digits: usize) -> Option<String> {
    if x.is_nan() {
        return None;
    }
    if x.is_infinite() {
        return Some(if x > 0.0 { "inf".into() } else { "-inf".into() });
    }
    if x == 0.0 {
        return Some("0".into());
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        Some(format!("{mantissa}e{sign}{:02}", exp.abs()))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        Some(trim_fraction(&format!("{x:.decimals$}")).to_string())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, job: &str, seed: Option<u64>) -> CliResult<String> {
        let mut out = String::new();
        let seed = seed.map_or("none".to_string(), |s| s.to_string());
        let _ = writeln!(out, "# effcap-kit v{} job={job} seed={seed}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "{}", self.columns.join(","));
        for (i, row) in self.rows.iter().enumerate() {
            let mut fields = Vec::with_capacity(row.len());
            for (cell, col) in row.iter().zip(&self.columns) {
                fields.push(match cell {
                    Cell::Real(x) => match format_real(*x, SIGNIFICANT_DIGITS) {
                        Some(s) => s,
                        None => return invalid(format!("row {i}: column {col} is not a number")),
                    },
                    Cell::Int(n) => n.to_string(),
                    Cell::Text(s) => s.clone(),
                });
            }
            let _ = writeln!(out, "{}", fields.join(","));
        }
        Ok(out)
    }
}

/// Writes `contents` to `path`, removing the file if writing fails midway.
pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let result = std::fs::File::create(path).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = result {
        let _ = std::fs::remove_file(path);
        return Err(io_err(e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (123456.789, "123456.789"),
            (1e-5, "1e-05"),
            (1.5e-7, "1.5e-07"),
            (0.0001234, "0.0001234"),
            (1e12, "1e+12"),
            (999999999999.0, "999999999999"),
            (-2.5, "-2.5"),
            (4.67760000001, "4.67760000001"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(format_real(x, 12).unwrap(), want, "{x}");
        }
        assert!(format_real(f64::NAN, 12).is_none());
    }

    #[test]
    fn rounding_can_bump_the_exponent() {
        assert_eq!(format_real(9.9999999999999e-5, 12).unwrap(), "0.0001");
        assert_eq!(format_real(999999999999.9, 12).unwrap(), "1e+12");
    }

    #[test]
    fn nan_rows_are_refused() {
        let mut t = Table::new(vec!["x"]);
        t.push(vec![Cell::Real(f64::NAN)]);
        assert!(t.render("j", None).is_err());
    }

    #[test]
    fn header_lines() {
        let mut t = Table::new(vec!["a", "b_db"]);
        t.push(vec![1.0.into(), f64::INFINITY.into()]);
        let text = t.render("rho-vs-snr", Some(7)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            format!("# effcap-kit v{} job=rho-vs-snr seed=7", env!("CARGO_PKG_VERSION"))
        );
        assert_eq!(lines[1], "a,b_db");
        assert_eq!(lines[2], "1,inf");
    }
}
