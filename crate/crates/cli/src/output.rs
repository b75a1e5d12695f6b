//! Report serialization: CSV with a frozen column order per report type, or
//! pretty-printed JSON. Reals are written with 17 significant digits so they
//! round-trip exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// `d.dddddddddddddddde±x`: 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn render(cell: &Cell, out: &mut String) {
    match cell {
        Cell::Int(v) => write!(out, "{v}").expect("writing to a String"),
        Cell::Real(v) => out.push_str(&format_real(*v)),
        Cell::Bool(v) => write!(out, "{v}").expect("writing to a String"),
        Cell::Text(v) => out.push_str(v),
    }
}

/// Header row plus one line per row, comma separated, LF terminated.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render(cell, &mut out);
        }
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn write_report(content: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
        }
    }
}
