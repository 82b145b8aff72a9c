//! Rendering reports as text, JSON or CSV.

use std::io::Write;

use serde::Serialize;

use crate::Format;

pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

/// A report that can be printed in every format.
pub trait Report: Serialize {
    fn text(&self) -> String;
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

pub fn emit<R: Report>(report: &R, format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => out.write_all(report.text().as_bytes()),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report).map_err(std::io::Error::other)?;
            out.write_all(b"\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(report.csv_header())?;
            for row in report.csv_rows() {
                w.write_record(row)?;
            }
            w.flush()
        }
    }
}

/// `{1,4}` style set notation.
pub fn set_text(xs: &[u32]) -> String {
    let parts: Vec<String> = xs.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Space-separated terms, the CSV cell format for lists.
pub fn list_cell(xs: &[u32]) -> String {
    let parts: Vec<String> = xs.iter().map(u32::to_string).collect();
    parts.join(" ")
}
