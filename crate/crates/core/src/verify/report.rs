//! Suite reports and their byte-stable JSON and CSV forms.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ReportFormat, SuiteConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// One executed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    /// Acceptance criterion the check belongs to; `None` for supplementary checks.
    pub criterion: Option<u8>,
    pub name: String,
    /// The mathematical statement being checked.
    pub claim: String,
    pub samples: usize,
    pub residual_max: f64,
    pub residual_median: f64,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Seconds spent in the check; omitted from emitted reports unless requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub config: SuiteConfig,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn empty(config: SuiteConfig) -> Self {
        Self { meta: ReportMeta { config, version: env!("CARGO_PKG_VERSION").into() }, checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn get(&self, check: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check == check)
    }

    /// Conjunction of the records bound to `criterion`; `None` if none ran.
    pub fn criterion_verdict(&self, criterion: u8) -> Option<Verdict> {
        let mut any = false;
        for c in self.checks.iter().filter(|c| c.criterion == Some(criterion)) {
            any = true;
            if c.verdict == Verdict::Fail {
                return Some(Verdict::Fail);
            }
        }
        any.then_some(Verdict::Pass)
    }

    /// Copy without timings, as emitted by default.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time_s = None;
        }
        r
    }
}

/// Formats a float with 17 significant digits; non-finite values map to `±f64::MAX`.
pub fn format_float(v: f64) -> String {
    let v = if v.is_nan() || v == f64::INFINITY {
        f64::MAX
    } else if v == f64::NEG_INFINITY {
        -f64::MAX
    } else {
        v
    };
    format!("{v:.16e}")
}

fn sanitize(mut r: Report) -> Report {
    let fix = |v: &mut f64| {
        *v = format_float(*v).parse().expect("formatted float parses");
    };
    for c in &mut r.checks {
        fix(&mut c.residual_max);
        fix(&mut c.residual_median);
        fix(&mut c.tol);
    }
    r
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is ordered by key.
            out.push_str("{\n");
            for (i, (k, item)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// JSON with sorted keys and fixed float formatting. Timings are kept only
/// when `timings` is set, since they break byte stability.
pub fn to_json(report: &Report, timings: bool) -> Result<String> {
    let r = if timings { report.clone() } else { report.without_timings() };
    let value = serde_json::to_value(sanitize(r)).map_err(|e| Error::Io(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    Ok(out)
}

pub fn from_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}

/// Flat rows `check,name,residual_max,residual_median,tol,verdict`.
pub fn to_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["check", "name", "residual_max", "residual_median", "tol", "verdict"]).map_err(io)?;
    for c in &report.checks {
        w.write_record([
            c.check.clone(),
            c.name.clone(),
            format_float(c.residual_max),
            format_float(c.residual_median),
            format_float(c.tol),
            c.verdict.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn render(report: &Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => to_json(report, false),
        ReportFormat::Csv => to_csv(report),
    }
}

/// Writes the report to `path`.
pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(report, format)?)?;
    Ok(())
}
