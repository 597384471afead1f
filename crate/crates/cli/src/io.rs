//! Panel CSV parsing, covariance files and atomic output.

use std::io::Write;
use std::path::Path;

use mww_core::TimeSeriesPanel;
use nalgebra::DMatrix;

use crate::CliError;

/// A panel read from CSV, with its column names.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelFile {
    pub names: Vec<String>,
    pub panel: TimeSeriesPanel,
}

/// Parses a header-first CSV panel. Lines starting with `#` are comments.
/// Empty or non-numeric cells are rejected with their line and column.
pub fn parse_panel(text: &str) -> Result<PanelFile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(format!("header: {e}")))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(CliError::parse("missing header row"));
    }
    let names: Vec<String> = headers.iter().map(str::to_string).collect();
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::parse(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(CliError::parse(format!(
                    "line {line}, column {}: missing value",
                    col + 1
                )));
            }
            let v: f64 = cell.parse().map_err(|_| {
                CliError::parse(format!(
                    "line {line}, column {}: not a number: {cell:?}",
                    col + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::parse(format!(
                    "line {line}, column {}: non-finite value {cell:?}",
                    col + 1
                )));
            }
            channels[col].push(v);
        }
    }
    if channels[0].is_empty() {
        return Err(CliError::parse("no data rows"));
    }
    let panel = TimeSeriesPanel::from_channels(channels).map_err(CliError::from)?;
    Ok(PanelFile { names, panel })
}

pub fn read_panel(path: &Path) -> Result<PanelFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    parse_panel(&text)
}

/// CSV panel with a header row, preceded by `#` comment lines.
pub fn format_panel(names: &[String], panel: &TimeSeriesPanel, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(names).expect("in-memory write");
    for t in 0..panel.len() {
        w.write_record(panel.row(t).iter().map(|v| v.to_string()))
            .expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
    out
}

/// Square matrix from rows of comma- or whitespace-separated numbers.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>().map_err(|_| {
                        CliError::parse(format!("line {}: not a number: {s:?}", i + 1))
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let p = rows.len();
    if p == 0 || rows.iter().any(|r| r.len() != p) {
        return Err(CliError::parse("covariance file must hold a square matrix"));
    }
    Ok(DMatrix::from_fn(p, p, |i, j| rows[i][j]))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
