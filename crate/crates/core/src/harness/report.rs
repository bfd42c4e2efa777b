use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use super::ScenarioConfig;
use crate::fusion::Method;
use crate::metrics::{Aggregation, GwValue};

/// Per-method outcome of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    /// GW error of each run against the ground truth; `null` where the method failed.
    pub per_run_gw: Vec<Option<f64>>,
    /// Aggregate over the successful runs; `null` if every run failed.
    pub rmgw: Option<f64>,
    /// Indices of the runs on which the method failed.
    pub failed_runs: Vec<usize>,
}

impl MethodReport {
    pub fn from_runs(per_run_gw: Vec<Option<f64>>, aggregation: Aggregation) -> Self {
        let failed_runs = per_run_gw.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| i).collect();
        let ok: Vec<GwValue> = per_run_gw.iter().flatten().map(|&v| GwValue::new(v)).collect();
        let rmgw = aggregation.apply(&ok).ok();
        Self { per_run_gw, rmgw, failed_runs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioConfig,
    pub methods: BTreeMap<Method, MethodReport>,
    /// Seconds spent in the experiment; the only nondeterministic field.
    pub wall_time: f64,
}

impl RunReport {
    pub fn rmgw(&self, method: Method) -> Option<f64> {
        self.methods.get(&method).and_then(|r| r.rmgw)
    }

    /// Fixed-width table of the aggregate error per method.
    pub fn summary_table(&self, format_value: impl Fn(f64) -> String) -> String {
        let label = match self.scenario.aggregation {
            Aggregation::RootMean => "RMGW",
            Aggregation::Mean => "mean GW",
        };
        let mut out = format!("{:<12} {:>12} {:>8}\n", "method", label, "failed");
        for (method, r) in &self.methods {
            let value = r.rmgw.map(&format_value).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{:<12} {:>12} {:>8}", method.name(), value, r.failed_runs.len());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

/// JSON: the whole report. CSV: `method,run_index,gw` rows (empty `gw` for
/// failed runs), a blank line, then `method,rmgw` summary rows.
pub fn serialize_report<W: Write>(report: &RunReport, format: ReportFormat, mut out: W) -> io::Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")
        }
        ReportFormat::Csv => {
            let mut rows = csv::Writer::from_writer(&mut out);
            rows.write_record(["method", "run_index", "gw"])?;
            for (method, r) in &report.methods {
                for (i, gw) in r.per_run_gw.iter().enumerate() {
                    let gw = gw.map(|v| v.to_string()).unwrap_or_default();
                    rows.write_record([method.name(), &i.to_string(), &gw])?;
                }
            }
            rows.flush()?;
            drop(rows);
            out.write_all(b"\n")?;
            let mut summary = csv::Writer::from_writer(&mut out);
            summary.write_record(["method", "rmgw"])?;
            for (method, r) in &report.methods {
                summary.write_record([method.name(), &r.rmgw.map(|v| v.to_string()).unwrap_or_default()])?;
            }
            summary.flush()
        }
    }
}

pub fn deserialize_report<R: Read>(input: R) -> io::Result<RunReport> {
    Ok(serde_json::from_reader(input)?)
}
