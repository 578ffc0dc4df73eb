// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV tables.
//!
//! Each file starts with `#` comment lines: the generator and library
//! versions, the full configuration that produced it, then any scalar
//! results. One header row and the data rows follow. Numbers are written in
//! Rust's shortest round-trip exponential form (`1.5e-3`), so equal inputs
//! give byte-equal files and every value parses back exactly.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&'static str> for Cell {
    fn from(s: &'static str) -> Self {
        Cell::Text(s)
    }
}

pub fn format_number(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// `key = value` result lines for the comment block.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(file: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            file: file.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    /// Complete file contents. `config` is the rendered configuration.
    pub fn to_csv(&self, config: &str) -> Result<Vec<u8>, CliError> {
        let mut out = String::new();
        out.push_str(&format!("# generator = coupled-emitters-cli {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# library = coupled-emitters {}\n", coupled_emitters::VERSION));
        for line in config.lines() {
            out.push_str(&format!("# config: {line}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("# result: {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(out.into_bytes());
        let fail = |e: csv::Error| CliError::Io(format!("{}: {e}", self.file));
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => (*s).to_owned(),
            }))
            .map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::Io(format!("{}: {}", self.file, e.error())))
    }
}

/// Writes every table into `dir` (created if missing). Each file goes to a
/// temporary name first and is renamed when complete; on any failure all
/// files of this call are removed.
pub fn write_tables(dir: &Path, tables: &[Table], config: &str) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let mut done: Vec<PathBuf> = Vec::new();
    let result = tables.iter().try_for_each(|t| {
        let path = dir.join(&t.file);
        let partial = dir.join(format!(".{}.partial", t.file));
        let written = t.to_csv(config).and_then(|bytes| {
            fs::write(&partial, bytes)
                .and_then(|_| fs::rename(&partial, &path))
                .map_err(|e| CliError::io(path.display(), e))
        });
        match written {
            Ok(()) => {
                done.push(path);
                Ok(())
            }
            Err(e) => {
                let _ = fs::remove_file(&partial);
                Err(e)
            }
        }
    });
    match result {
        Ok(()) => Ok(done),
        Err(e) => {
            for p in &done {
                let _ = fs::remove_file(p);
            }
            Err(e)
        }
    }
}
