//! Dataset parsing and CSV emission.
//!
//! Input schema: header `x,time,status`, one record per line, `status` one of
//! `event`, `censored`, `cured`; `#` starts a comment line. Output files echo
//! their full run configuration as `# key=value` lines ahead of the header,
//! and numbers are written with 12 significant digits so emitted values
//! re-parse to the same decimals on every platform.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cureplim::{Outcome, StepCurve, SurvivalRecord};

use crate::error::CliError;

/// One rejected input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    pub line: usize,
    pub message: String,
}

/// A parsed dataset: accepted records plus diagnostics for every rejected
/// row. Rejected rows are never dropped silently.
#[derive(Debug, Clone)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub records: Vec<SurvivalRecord>,
    pub diagnostics: Vec<RowDiagnostic>,
}

pub fn parse_dataset(path: &Path) -> Result<DatasetFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset_str(&text, path)
}

pub fn parse_dataset_str(text: &str, path: &Path) -> Result<DatasetFile, CliError> {
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != ["x", "time", "status"] {
                return Err(CliError::MalformedData {
                    path: path.display().to_string(),
                    line: line_no,
                    message: format!("expected header `x,time,status`, found `{line}`"),
                });
            }
            saw_header = true;
            continue;
        }
        match parse_row(line) {
            Ok(rec) => records.push(rec),
            Err(message) => diagnostics.push(RowDiagnostic {
                line: line_no,
                message,
            }),
        }
    }

    if records.is_empty() {
        return Err(CliError::EmptyFile {
            path: path.display().to_string(),
            rejected: diagnostics.len(),
        });
    }
    Ok(DatasetFile {
        path: path.to_path_buf(),
        records,
        diagnostics,
    })
}

fn parse_row(line: &str) -> Result<SurvivalRecord, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(format!("expected 3 fields, found {}", fields.len()));
    }
    let x: f64 = fields[0]
        .parse()
        .map_err(|_| format!("non-numeric covariate `{}`", fields[0]))?;
    if !x.is_finite() {
        return Err(format!("covariate `{}` is not finite", fields[0]));
    }
    let time: f64 = fields[1]
        .parse()
        .map_err(|_| format!("non-numeric time `{}`", fields[1]))?;
    if !time.is_finite() || time < 0.0 {
        return Err(format!(
            "time `{}` must be finite and nonnegative",
            fields[1]
        ));
    }
    let outcome = match fields[2] {
        "event" => Outcome::Event,
        "censored" => Outcome::CensoredUnknown,
        "cured" => Outcome::CensoredCured,
        other => return Err(format!("unknown status token `{other}`")),
    };
    Ok(SurvivalRecord { x, time, outcome })
}

/// 12 significant digits, scientific notation; stable across platforms.
pub fn fmt_value(v: f64) -> String {
    format!("{:.11e}", v)
}

/// Render `# key=value` metadata lines followed by a CSV header and rows.
pub fn render_csv(metadata: &[(String, String)], header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "# {k}={v}").unwrap();
    }
    writeln!(out, "{header}").unwrap();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_value(*v)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

/// Curve evaluations `t,value` on a grid, with metadata.
pub fn render_curve(curve: &StepCurve, grid: &[f64], metadata: &[(String, String)]) -> String {
    let rows: Vec<Vec<f64>> = grid.iter().map(|&t| vec![t, curve.eval(t)]).collect();
    render_csv(metadata, "t,value", &rows)
}

/// Write to `path`, or to stdout when no path is given.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
