//! Table rendering for the command-line front end.
//!
//! Floats are printed with a fixed number of significant digits, rounding
//! ties to even on the exact binary value. Values with a decimal exponent in
//! `[−5, precision)` use positional notation, others scientific; trailing
//! zeros are dropped. Rationals are always printed exactly as `p/q`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::arith::Rational;

pub const MIN_PRECISION: usize = 4;
pub const MAX_PRECISION: usize = 17;
pub const DEFAULT_PRECISION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
    /// Whitespace-aligned columns under a `#` header line.
    RationalText,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
            Format::RationalText => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            "rational-text" => Ok(Format::RationalText),
            other => Err(format!("unknown format '{other}' (expected csv, tsv or rational-text)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Exact(Rational),
    Text(String),
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

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Exact(v)
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

impl Cell {
    pub fn render(&self, precision: usize) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v, precision),
            Cell::Exact(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        let body: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|c| c.render(precision)).collect()).collect();
        let mut out = String::new();
        match format {
            Format::Csv | Format::Tsv => {
                let sep = if format == Format::Csv { ',' } else { '\t' };
                let line = |cells: &[String], out: &mut String| {
                    let quoted: Vec<String> = cells.iter().map(|c| quote(c, sep)).collect();
                    out.push_str(&quoted.join(&sep.to_string()));
                    out.push('\n');
                };
                line(&self.columns, &mut out);
                for r in &body {
                    line(r, &mut out);
                }
            }
            Format::RationalText => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
                widths[0] += 2;
                for r in &body {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String], first: &str, out: &mut String| {
                    let padded: Vec<String> = cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            let c = if i == 0 { format!("{first}{c}") } else { c.clone() };
                            format!("{c:>w$}", w = widths[i])
                        })
                        .collect();
                    let _ = writeln!(out, "{}", padded.join("  "));
                };
                line(&self.columns, "# ", &mut out);
                for r in &body {
                    line(r, "", &mut out);
                }
            }
        }
        out
    }
}

fn quote(cell: &str, sep: char) -> String {
    if cell.contains(sep) || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `x` to `precision` significant digits.
pub fn format_float(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let precision = precision.max(1);
    let sci = format!("{:.*e}", precision - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if (-5..precision as i32).contains(&exp) {
        let (int_part, frac_part) = if exp >= 0 {
            let cut = exp as usize + 1;
            (digits[..cut].to_string(), digits[cut..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat((-exp - 1) as usize), digits))
        };
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        }
    }
}

/// Inverse of the renderer for numeric cells: `p/q`, integers or floats.
pub fn parse_number(cell: &str) -> Option<f64> {
    if let Some((p, q)) = cell.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        return Some(p / q);
    }
    cell.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_round_to_even() {
        assert_eq!(format_float(0.125, 2), "0.12");
        assert_eq!(format_float(0.375, 2), "0.38");
        assert_eq!(format_float(2.5, 1), "2");
        assert_eq!(format_float(3.5, 1), "4");
        assert_eq!(format_float(1.125, 3), "1.12");
        assert_eq!(format_float(1.1250001, 3), "1.13");
    }

    #[test]
    fn layout() {
        assert_eq!(format_float(618.36344, 5), "618.36");
        assert_eq!(format_float(-0.31834, 6), "-0.31834");
        assert_eq!(format_float(1.0, 6), "1");
        assert_eq!(format_float(1e-3, 6), "0.001");
        assert_eq!(format_float(1.23456e-7, 4), "1.235e-7");
        assert_eq!(format_float(1.2345e-7, 5), "1.2345e-7");
        assert_eq!(format_float(5200.0, 4), "5200");
        assert_eq!(format_float(52000.0, 4), "5.2e4");
        assert_eq!(format_float(999999.7, 6), "1e6");
        assert_eq!(format_float(0.0, 6), "0");
        assert_eq!(format_float(f64::NAN, 6), "NaN");
    }

    #[test]
    fn roundtrip_at_full_precision() {
        for x in [std::f64::consts::PI, -1e-300, 6.02214076e23, 0.1 + 0.2, 5e-324] {
            assert_eq!(format_float(x, 17).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn renders_formats() {
        let mut t = Table::new(["L", "k", "value"]);
        t.push(vec![2u32.into(), 3u32.into(), Rational::new(-1, 72).unwrap().into()]);
        t.push(vec![0u32.into(), 0u32.into(), 0.5.into()]);
        assert_eq!(t.render(Format::Csv, 6), "L,k,value\n2,3,-1/72\n0,0,0.5\n");
        assert_eq!(t.render(Format::Tsv, 6), "L\tk\tvalue\n2\t3\t-1/72\n0\t0\t0.5\n");
        let txt = t.render(Format::RationalText, 6);
        assert!(txt.starts_with("# L"));
        assert_eq!(txt.lines().count(), 3);
        assert!(txt.lines().nth(1).unwrap().ends_with("-1/72"));
    }

    #[test]
    fn quoting() {
        let mut t = Table::new(["a"]);
        t.push(vec!["x,y".into()]);
        assert_eq!(t.render(Format::Csv, 6), "a\n\"x,y\"\n");
    }

    #[test]
    fn parse_cells() {
        assert_eq!(parse_number("-1/72"), Some(-1.0 / 72.0));
        assert_eq!(parse_number("6.18363e2"), Some(618.363));
        assert_eq!(parse_number("x"), None);
        assert_eq!("rational-text".parse::<Format>(), Ok(Format::RationalText));
        assert!("json".parse::<Format>().is_err());
    }
}
