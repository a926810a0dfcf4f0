//! Versioned CSV tables with an optional JSON mirror.
//!
//! Row 1 of every CSV is `#schema=<id>`, row 2 the header.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Column holding elapsed time; excluded when comparing runs.
pub const WALL_TIME: &str = "wall_time_s";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// `f64` rendered in shortest round-trip form; NaN as an empty cell.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

impl Table {
    pub fn new(schema: &'static str, columns: Vec<&'static str>) -> Self {
        Table { schema, columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the {} header", self.schema);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#schema={}", self.schema)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Write `<dir>/<stem>.csv` (and `.json` when asked); returns the paths.
    pub fn save(&self, dir: &Path, stem: &str, json: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{stem}.csv"));
        self.write_csv(File::create(&csv_path)?)?;
        let mut paths = vec![csv_path];
        if json {
            let json_path = dir.join(format!("{stem}.json"));
            serde_json::to_writer_pretty(File::create(&json_path)?, self)?;
            paths.push(json_path);
        }
        Ok(paths)
    }
}

/// `<sweep>_<UTC timestamp>`, with a numeric suffix if that name is taken.
pub fn output_stem(dir: &Path, sweep: &str) -> String {
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%3fZ");
    let base = format!("{sweep}_{stamp}");
    let mut stem = base.clone();
    let mut i = 1;
    while dir.join(format!("{stem}.csv")).exists() {
        stem = format!("{base}-{i}");
        i += 1;
    }
    stem
}

/// CSV text with the schema line, header and rows, minus the wall-time column.
pub fn strip_wall_time(csv_text: &str) -> String {
    let mut lines = csv_text.lines();
    let mut out = String::new();
    if let Some(schema) = lines.next() {
        out.push_str(schema);
        out.push('\n');
    }
    let rest: String = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
    let headers = reader.headers().cloned().unwrap_or_default();
    let skip = headers.iter().position(|h| h == WALL_TIME);
    let keep = |rec: &csv::StringRecord| -> String {
        rec.iter().enumerate().filter(|(i, _)| Some(*i) != skip).map(|(_, v)| v).collect::<Vec<_>>().join(",")
    };
    out.push_str(&keep(&headers));
    out.push('\n');
    for rec in reader.records().flatten() {
        out.push_str(&keep(&rec));
        out.push('\n');
    }
    out
}
