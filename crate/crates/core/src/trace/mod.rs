// SPDX-License-Identifier: Apache-2.0

//! Movement and accelerometer traces, repetition counting, session reports.

mod accel;
mod movement;
mod report;
pub mod synth;

use thiserror::Error;

pub use accel::{count_reps_accel, parse_accel_csv, write_accel_csv, AccelSample, AccelTrace, AxisStats, RepAnalysis};
pub use movement::{parse_movement_csv, write_movement_csv, MovementTrace, MOVEMENT_HEADER};
pub use report::{apply_pain, emit_report_json, round_numbers, SessionMeta, SessionReport, REPORT_SCHEMA_ID};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("missing column '{0}'")]
    MissingColumn(String),
    #[error("line {line}: column '{column}' has non-numeric value '{value}'")]
    NonNumeric { line: u64, column: String, value: String },
    #[error("line {line}: timestamp {t_ms} ms does not increase (previous {prev_ms} ms)")]
    NonMonotonic { line: u64, t_ms: u64, prev_ms: u64 },
    #[error("line {line}: {message}")]
    Invalid { line: u64, message: String },
    #[error("no samples")]
    NoSamples,
}

/// Shared CSV reader: `#` comment lines, trimmed cells, header required.
fn reader<R: std::io::Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).has_headers(true).from_reader(input)
}

/// Column index for each expected header name.
fn column_map<R: std::io::Read>(rdr: &mut csv::Reader<R>, names: &[&str]) -> Result<Vec<usize>, TraceError> {
    let headers = rdr.headers().map_err(|e| TraceError::Csv { line: 1, message: e.to_string() })?.clone();
    names
        .iter()
        .map(|n| headers.iter().position(|h| h == *n).ok_or_else(|| TraceError::MissingColumn(n.to_string())))
        .collect()
}

fn csv_error(e: csv::Error) -> TraceError {
    let line = e.position().map_or(0, |p| p.line());
    TraceError::Csv { line, message: e.to_string() }
}

fn cell(rec: &csv::StringRecord, idx: usize) -> &str {
    rec.get(idx).unwrap_or("")
}

fn parse_t(rec: &csv::StringRecord, idx: usize, line: u64, prev: Option<u64>) -> Result<u64, TraceError> {
    let raw = cell(rec, idx);
    let t: u64 =
        raw.parse().map_err(|_| TraceError::NonNumeric { line, column: "t_ms".into(), value: raw.to_string() })?;
    if let Some(prev_ms) = prev {
        if t <= prev_ms {
            return Err(TraceError::NonMonotonic { line, t_ms: t, prev_ms });
        }
    }
    Ok(t)
}

fn parse_f64(rec: &csv::StringRecord, idx: usize, column: &str, line: u64) -> Result<f64, TraceError> {
    let raw = cell(rec, idx);
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(TraceError::NonNumeric { line, column: column.to_string(), value: raw.to_string() }),
    }
}
