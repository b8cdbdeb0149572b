//! CSV and JSON report output.

use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::harness::ReportRow;

pub const CSV_HEADER: &str = "network,predictor,alpha,negatives,auc_mean,auc_std,precision_mean,precision_std,time_mean_s,time_std_s,repetitions";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidParameter(format!(
                "unknown report format `{s}`"
            ))),
        }
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

fn rounded(r: &ReportRow) -> ReportRow {
    let s = |x| round_sig(x, 6);
    ReportRow {
        alpha: s(r.alpha),
        auc_mean: s(r.auc_mean),
        auc_std: s(r.auc_std),
        precision_mean: s(r.precision_mean),
        precision_std: s(r.precision_std),
        time_mean_s: s(r.time_mean_s),
        time_std_s: s(r.time_std_s),
        ..r.clone()
    }
}

/// Writes one row per cell; reals carry six significant digits.
pub fn emit_report<W: Write>(rows: &[ReportRow], format: ReportFormat, mut sink: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("report has no rows".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in rows {
                w.serialize(rounded(r))?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let rows: Vec<ReportRow> = rows.iter().map(rounded).collect();
            serde_json::to_writer_pretty(&mut sink, &rows)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn parse_report<R: Read>(input: R, format: ReportFormat) -> Result<Vec<ReportRow>> {
    match format {
        ReportFormat::Csv => {
            let mut r = csv::Reader::from_reader(input);
            r.deserialize()
                .map(|row| row.map_err(Error::from))
                .collect()
        }
        ReportFormat::Json => Ok(serde_json::from_reader(input)?),
    }
}
