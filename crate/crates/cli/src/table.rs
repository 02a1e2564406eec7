use std::io::Write;

use crate::error::Result;

/// CSV output with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to a file path, or standard output for "-".
    pub fn write(&self, path: &str) -> Result<()> {
        if path == "-" {
            self.write_to(std::io::stdout().lock())
        } else {
            self.write_to(std::fs::File::create(path)?)
        }
    }
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}
