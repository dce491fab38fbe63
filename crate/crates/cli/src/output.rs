use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::Format;

/// Flat table for CSV output.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub manifest: RunManifest,
    pub body: Value,
    pub table: Option<Table>,
    pub success: bool,
}

impl Report {
    pub fn new(manifest: RunManifest, body: impl Serialize) -> Result<Self> {
        Ok(Report { manifest, body: serde_json::to_value(body)?, table: None, success: true })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.success &= !failed;
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let doc = json!({ "manifest": self.manifest, "report": self.body });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
            Format::Csv => {
                let Some(table) = &self.table else {
                    bail!("csv output is not available for {}", self.manifest.command);
                };
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.headers)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }
}
