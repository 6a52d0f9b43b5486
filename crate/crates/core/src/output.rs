//! CSV and JSON emission for result rows.
//!
//! CSV floats are written in scientific notation with 17 significant digits
//! so that every value round-trips exactly; absent values are empty cells.

use std::io::{self, Write};

use serde::Serialize;

/// A row type with a fixed CSV column layout.
pub trait Tabular: Serialize {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub fn write_csv<T: Tabular, W: Write>(rows: &[T], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::header())?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

pub fn to_csv_string<T: Tabular>(rows: &[T]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}
