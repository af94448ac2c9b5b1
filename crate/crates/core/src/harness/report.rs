use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AuditReport, HarnessError};

pub const CSV_HEADER: &str =
    "graph6,vertices,edges,flags,paper_verdict,oracle_verdict,radius,residual,discrepancy";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_sci(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

/// Serializes `report`; identical reports give identical bytes.
pub fn render_report(report: &AuditReport, format: ReportFormat) -> Result<String, HarnessError> {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in &report.rows {
                // graph6 characters never include ',' or '"', so no quoting
                // is needed.
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    row.graph6,
                    row.vertices,
                    row.edges,
                    row.flags.label(),
                    row.paper_verdict.as_str(),
                    row.oracle_verdict.as_str(),
                    opt(row.radius),
                    opt_sci(row.residual),
                    row.discrepancy
                );
            }
            Ok(out)
        }
    }
}

/// Writes the rendered report to `path`, returning the byte count.
pub fn write_report(report: &AuditReport, format: ReportFormat, path: &Path) -> Result<usize, HarnessError> {
    let text = render_report(report, format)?;
    std::fs::write(path, &text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text.len())
}
