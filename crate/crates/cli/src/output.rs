use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::args::Format;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("ANISOWALK_VERSION");

/// A CSV table: header fields and rows of already formatted cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// `key,value` rows for every scalar leaf of a JSON document.
    pub fn flatten(value: &Value) -> Self {
        fn walk(prefix: &str, v: &Value, t: &mut Table) {
            match v {
                Value::Object(m) => {
                    for (k, v) in m {
                        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                        walk(&key, v, t);
                    }
                }
                Value::Array(a) => {
                    for (i, v) in a.iter().enumerate() {
                        walk(&format!("{prefix}.{i}"), v, t);
                    }
                }
                Value::String(s) => t.push(vec![prefix.to_string(), s.clone()]),
                other => t.push(vec![prefix.to_string(), other.to_string()]),
            }
        }
        let mut t = Table::new(&["key", "value"]);
        walk("", value, &mut t);
        t
    }
}

/// `(file name, comment, (x, y) pairs)` written under `--emit-plotdata`.
pub type Plot = (String, String, Vec<(f64, f64)>);

/// The result of a subcommand in both output formats.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub plots: Vec<Plot>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            table: None,
            plots: Vec::new(),
        }
    }
}

pub fn cell<T: ToString>(v: T) -> String {
    v.to_string()
}

pub fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub struct Sink {
    command: String,
    config: ExperimentConfig,
    format: Format,
    out: Option<PathBuf>,
    plotdata: Option<PathBuf>,
}

impl Sink {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        Sink {
            command: command.to_string(),
            config: config.clone(),
            format: config.format.unwrap_or_default(),
            out: config.out.clone(),
            plotdata: config.emit_plotdata.clone(),
        }
    }

    /// Comment lines naming the version, the command and every setting that
    /// can change the output.
    fn header(&self) -> String {
        let mut h = String::new();
        let _ = writeln!(h, "# anisowalk {VERSION}");
        let _ = writeln!(h, "# command: {}", self.command);
        let _ = writeln!(h, "# seed: {}", self.config.seed());
        let cfg = serde_json::to_string(&self.config).unwrap_or_default();
        let _ = writeln!(h, "# config: {cfg}");
        h
    }

    fn body(&self, report: &Report) -> CliResult<String> {
        Ok(match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&report.json)?;
                s.push('\n');
                s
            }
            Format::Csv => match &report.table {
                Some(t) => t.render(),
                None => Table::flatten(&report.json).render(),
            },
        })
    }

    pub fn emit(&self, report: &Report) -> CliResult<()> {
        let body = self.body(report)?;
        match &self.out {
            Some(path) => write_text(path, &(self.header() + &body))?,
            None => print!("{body}"),
        }
        if let Some(dir) = &self.plotdata {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
            for (name, comment, points) in &report.plots {
                let mut s = self.header();
                let _ = writeln!(s, "# {comment}");
                for (x, y) in points {
                    let _ = writeln!(s, "{x} {y}");
                }
                write_text(&dir.join(name), &s)?;
            }
        }
        Ok(())
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}
