//! Suite configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::exec::Execution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

/// Everything a suite run depends on. Missing fields in a JSON config file
/// take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub a: f64,
    /// Base sample count; checks scale it to their own needs.
    pub samples: usize,
    pub seed: u64,
    pub b: f64,
    pub c: f64,
    /// Half-width of the excluded bands around `L_o`, the axis `r = 0` and
    /// the outer boundary `r_o = 1/a`.
    pub exclude: f64,
    /// Tolerance per check id.
    pub tol_overrides: BTreeMap<String, f64>,
    /// When set, only checks matching one of these selectors run.
    pub only: Option<BTreeSet<String>>,
    /// Checks matching one of these selectors are skipped.
    pub skip: BTreeSet<String>,
    /// Adds `ε·dx₁dx₂` to `g_a` in the twistor check (negative control).
    pub perturbation: Option<f64>,
    pub threads: Option<usize>,
    pub execution: Execution,
    pub report: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            samples: 300,
            seed: 42,
            b: 1.0,
            c: 0.0,
            exclude: 1e-3,
            tol_overrides: BTreeMap::new(),
            only: None,
            skip: BTreeSet::new(),
            perturbation: None,
            threads: None,
            execution: Execution::Parallel,
            report: None,
            format: ReportFormat::Json,
        }
    }
}

/// A selector matches a check id exactly or as a `_`-separated prefix, so
/// `c05` selects every record of criterion 5.
pub fn selector_matches(selector: &str, id: &str) -> bool {
    id == selector || (id.starts_with(selector) && id[selector.len()..].starts_with('_'))
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::Config(format!("a must be positive and finite, got {}", self.a)));
        }
        if self.samples < 1 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.b.is_finite() && self.c.is_finite()) || (self.b == 0.0 && self.c == 0.0) {
            return Err(Error::Config("(b, c) must be finite and not both zero".into()));
        }
        if !(self.exclude > 0.0 && self.exclude < 1.0 / (10.0 * self.a)) {
            return Err(Error::Config(format!(
                "exclusion must lie in (0, 1/(10a)) = (0, {}), got {}",
                1.0 / (10.0 * self.a),
                self.exclude
            )));
        }
        for (id, tol) in &self.tol_overrides {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(Error::Config(format!("tolerance for {id} must be positive, got {tol}")));
            }
            if super::checks::find(id).is_none() {
                return Err(Error::Config(format!("unknown check id {id:?}")));
            }
        }
        if let Some(e) = self.perturbation {
            if !e.is_finite() {
                return Err(Error::Config("perturbation must be finite".into()));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether the check `id` is selected by `only` and `skip`.
    pub fn enabled(&self, id: &str) -> bool {
        let selected = match &self.only {
            Some(set) => set.iter().any(|s| selector_matches(s, id)),
            None => true,
        };
        selected && !self.skip.iter().any(|s| selector_matches(s, id))
    }

    pub fn tol(&self, id: &str, default: f64) -> f64 {
        self.tol_overrides.get(id).copied().unwrap_or(default)
    }

    /// Reads a JSON config file.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
