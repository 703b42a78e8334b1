//! Table, CSV and JSON output.

use serde::Serialize;
use stirling_core::decimal;
use stirling_core::{Dyadic, Interval, Precision, Rounding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Decimal endpoints next to the exact dyadic ones.
#[derive(Debug, Clone, Serialize)]
pub struct ShownInterval {
    pub lo: String,
    pub hi: String,
    pub lo_exact: Dyadic,
    pub hi_exact: Dyadic,
}

impl ShownInterval {
    pub fn new(iv: &Interval, p: Precision) -> Self {
        let (lo, hi) = decimal::render_interval(iv, p);
        ShownInterval {
            lo,
            hi,
            lo_exact: iv.lo().clone(),
            hi_exact: iv.hi().clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShownBound {
    pub value: String,
    pub exact: Dyadic,
}

impl ShownBound {
    pub fn new(x: &Dyadic, digits: u32, dir: Rounding) -> Self {
        ShownBound {
            value: decimal::render(x, digits, dir),
            exact: x.clone(),
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n") + "\n"
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        out += &row.join(",");
        out.push('\n');
    }
    out
}

pub fn rows(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => csv(header, rows),
        _ => table(header, rows),
    }
}
