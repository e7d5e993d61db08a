//! CSV and JSON report writers.
//!
//! CSV reports open with a `#` line naming the report kind and schema
//! version, then (unless reproducible output was requested) a
//! `# generated_unix=` line, then an RFC-4180 header row.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn csv_preamble(kind: &str, reproducible: bool) -> String {
    let mut out = format!("# spa-witness {kind} schema={REPORT_SCHEMA_VERSION}\r\n");
    if !reproducible {
        out.push_str(&format!("# generated_unix={}\r\n", unix_timestamp()));
    }
    out
}

/// Serializes `rows` as CSV under the given header. Rows must serialize to
/// flat records matching `columns`.
pub fn write_csv<T: Serialize>(
    kind: &str,
    columns: &[&str],
    rows: &[T],
    reproducible: bool,
) -> Result<String, csv::Error> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    wtr.write_record(columns)?;
    for row in rows {
        wtr.serialize(row)?;
    }
    let body = String::from_utf8(wtr.into_inner().map_err(|e| e.into_error())?)
        .expect("csv output is utf-8");
    Ok(csv_preamble(kind, reproducible) + &body)
}

pub fn write_json_array<T: Serialize>(rows: &[T]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("report rows serialize");
    out.push('\n');
    out
}
