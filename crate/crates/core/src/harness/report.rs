//! CSV and JSON output of statistics rows.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{StatsRow, VERSION};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// The column order of the CSV output.
pub const CSV_HEADER: [&str; 24] = [
    "X",
    "sign",
    "family",
    "n_orders",
    "sum_cl3",
    "sum_i3",
    "sum_diff",
    "sum_diff_hred",
    "avg_cl3",
    "avg_i3",
    "avg_diff",
    "avg_diff_hred",
    "avg_cl3_decimal",
    "avg_i3_decimal",
    "avg_diff_decimal",
    "predicted_cl3",
    "predicted_i3",
    "predicted_diff",
    "mass_lo",
    "mass_hi",
    "relative_error_cl3",
    "relative_error_i3",
    "relative_error_diff",
    "version",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Cache(format!("csv: {e}"))
}

pub fn to_csv(rows: &[StatsRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_HEADER).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Cache(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Cache(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Vec<StatsRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    version: String,
    rows: Vec<StatsRow>,
}

pub fn to_json(rows: &[StatsRow]) -> Result<String> {
    let report = JsonReport { version: VERSION.to_string(), rows: rows.to_vec() };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

pub fn from_json(text: &str) -> Result<Vec<StatsRow>> {
    Ok(serde_json::from_str::<JsonReport>(text)?.rows)
}

/// The JSON schema of [`to_json`] output.
pub const SCHEMA: &str = include_str!("../../schema/stats_report.schema.json");

pub fn render(rows: &[StatsRow], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
        Format::Text => Ok(rows.iter().map(text_line).collect()),
    }
}

fn text_line(r: &StatsRow) -> String {
    format!(
        "X={} sign={} family={} orders={} avg|Cl3|={:.5} (pred {:.5}) avg|I3|={:.5} (pred {:.5}) avg diff={:.5} (pred {:.5})\n",
        r.X,
        r.sign,
        r.family,
        r.n_orders,
        r.avg_cl3_decimal,
        r.predicted_cl3,
        r.avg_i3_decimal,
        r.predicted_i3,
        r.avg_diff_decimal,
        r.predicted_diff
    )
}

pub fn write(rows: &[StatsRow], format: Format, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(render(rows, format)?.as_bytes())?;
    Ok(())
}
