//! Self-describing CSV or JSON output: a `#` header with the resolved
//! configuration, the rows, then `#` summary lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const OUT_DIR_ENV: &str = "CYCLESPACE_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Rows and summary produced by a command.
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(&'static str, Value)>,
    /// Whether every assertion of the command held.
    pub passed: bool,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), rows: Vec::new(), summary: Vec::new(), passed: true }
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<Value>) {
        self.summary.push((key, value.into()));
    }
}

pub struct Destination {
    pub path: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

impl Destination {
    /// `--out` wins; otherwise `$CYCLESPACE_OUT_DIR/<command>.<ext>`; otherwise stdout.
    pub fn resolve(out: Option<PathBuf>, format: Format, timestamp: bool, command: &str) -> Self {
        let path = out.or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| Path::new(&d).join(format!("{command}.{}", format.extension())))
        });
        Destination { path, format, timestamp }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(config: &Value) -> Vec<(String, String)> {
    match config {
        Value::Object(map) => map.iter().map(|(k, v)| (k.clone(), cell(v))).collect(),
        other => vec![("config".into(), cell(other))],
    }
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn write_report<C: Serialize>(dest: &Destination, command: &str, config: &C, report: &Report) -> io::Result<()> {
    let config = serde_json::to_value(config).map_err(io::Error::other)?;
    let mut sink: Box<dyn Write> = match &dest.path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match dest.format {
        Format::Csv => write_csv(&mut sink, command, &config, dest.timestamp, report)?,
        Format::Json => write_json(&mut sink, command, config, dest.timestamp, report)?,
    }
    sink.flush()
}

fn write_csv(w: &mut dyn Write, command: &str, config: &Value, timestamp: bool, report: &Report) -> io::Result<()> {
    writeln!(w, "# cyclespace {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# command = {command}")?;
    for (k, v) in flatten(config) {
        writeln!(w, "# {k} = {v}")?;
    }
    if timestamp {
        writeln!(w, "# timestamp_unix = {}", unix_time())?;
    }
    {
        let mut csv = csv::Writer::from_writer(&mut *w);
        csv.write_record(&report.columns)?;
        for row in &report.rows {
            csv.write_record(row.iter().map(cell))?;
        }
        csv.flush()?;
    }
    for (k, v) in &report.summary {
        writeln!(w, "# summary {k} = {}", cell(v))?;
    }
    writeln!(w, "# summary passed = {}", report.passed)
}

fn write_json(w: &mut dyn Write, command: &str, config: Value, timestamp: bool, report: &Report) -> io::Result<()> {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| Value::Object(report.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
        .collect();
    let mut summary: Map<String, Value> = report.summary.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    summary.insert("passed".into(), report.passed.into());
    let mut doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "columns": report.columns,
        "rows": rows,
        "summary": summary,
    });
    if timestamp {
        doc["timestamp_unix"] = unix_time().into();
    }
    serde_json::to_writer_pretty(&mut *w, &doc).map_err(io::Error::other)?;
    writeln!(w)
}
