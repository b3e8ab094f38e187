//! Plain-text and CSV reports plus the run manifest.
//!
//! `report.txt` and `report.csv` are pure functions of the run inputs. Clock
//! readings only ever go to `manifest.json`.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::{canonical_json, write_file};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_TXT: &str = "report.txt";
pub const REPORT_CSV: &str = "report.csv";
pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub corpus_sha256: Option<String>,
    pub seed: u64,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

/// Fixed-precision number for report cells.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.4}")
    }
}

pub fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

impl Report {
    pub fn new(command: &str, seed: u64, corpus_sha256: Option<String>) -> Self {
        Report {
            command: command.into(),
            corpus_sha256,
            seed,
            ..Report::default()
        }
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        vec![
            ("version", VERSION.to_string()),
            ("command", self.command.clone()),
            ("corpus_sha256", self.corpus_sha256.clone().unwrap_or_else(|| "-".into())),
            ("seed", self.seed.to_string()),
        ]
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.header() {
            let _ = writeln!(s, "{k}: {v}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n== {} ==", t.name);
            let mut width: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, cell) in width.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            let rule: Vec<String> = width.iter().map(|w| "-".repeat(*w)).collect();
            let _ = writeln!(s, "{}", rule.join("  "));
            for r in &t.rows {
                let _ = writeln!(s, "{}", line(r));
            }
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        s
    }

    /// One record per line: `meta,key,value`, `<table>,columns,...`,
    /// `<table>,row,...` and `note,<text>`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for (k, v) in self.header() {
            w.write_record(["meta", k, v.as_str()])?;
        }
        for t in &self.tables {
            let mut rec = vec![t.name.as_str(), "columns"];
            rec.extend(t.columns.iter().map(String::as_str));
            w.write_record(&rec)?;
            for r in &t.rows {
                let mut rec = vec![t.name.as_str(), "row"];
                rec.extend(r.iter().map(String::as_str));
                w.write_record(&rec)?;
            }
        }
        for n in &self.notes {
            w.write_record(["note", n.as_str()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }

    pub fn from_csv(text: &str) -> Result<Report> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut report = Report::default();
        for rec in r.records() {
            let rec = rec?;
            let bad = || Error::Invalid(format!("malformed report record `{}`", rec.iter().collect::<Vec<_>>().join(",")));
            let first = rec.get(0).ok_or_else(bad)?;
            match (first, rec.get(1)) {
                ("meta", Some(key)) => {
                    let value = rec.get(2).unwrap_or("").to_string();
                    match key {
                        "command" => report.command = value,
                        "corpus_sha256" => report.corpus_sha256 = (value != "-").then_some(value),
                        "seed" => report.seed = value.parse().map_err(|_| bad())?,
                        _ => {}
                    }
                }
                ("note", Some(text)) => report.notes.push(text.to_string()),
                (name, Some("columns")) => report.tables.push(Table {
                    name: name.into(),
                    columns: rec.iter().skip(2).map(String::from).collect(),
                    rows: Vec::new(),
                }),
                (name, Some("row")) => {
                    let t = report.tables.last_mut().filter(|t| t.name == name).ok_or_else(bad)?;
                    t.rows.push(rec.iter().skip(2).map(String::from).collect());
                }
                _ => return Err(bad()),
            }
        }
        Ok(report)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    command: &'a str,
    seed: u64,
    corpus_sha256: Option<&'a str>,
    config: &'a Value,
    outputs: Vec<String>,
    started_unix_ms: u128,
    elapsed_ms: u128,
}

/// Writes `report.txt`, `report.csv` and `manifest.json` under `out`.
/// `extra` lists other files the command wrote there.
pub fn write_outputs(out: &Path, report: &Report, config: &Value, started: SystemTime, extra: &[String]) -> Result<()> {
    write_file(&out.join(REPORT_TXT), report.to_text())?;
    write_file(&out.join(REPORT_CSV), report.to_csv()?)?;
    let mut outputs = vec![REPORT_TXT.to_string(), REPORT_CSV.to_string()];
    outputs.extend(extra.iter().cloned());
    let ms = |t: SystemTime| t.duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let manifest = Manifest {
        version: VERSION,
        command: &report.command,
        seed: report.seed,
        corpus_sha256: report.corpus_sha256.as_deref(),
        config,
        outputs,
        started_unix_ms: ms(started),
        elapsed_ms: started.elapsed().map(|d| d.as_millis()).unwrap_or(0),
    };
    write_file(&out.join(MANIFEST), canonical_json(&manifest))
}
