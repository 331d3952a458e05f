//! The verification suite: configuration, sampling, the check registry and
//! report emission.

pub mod checks;
pub mod config;
pub mod report;
pub mod sample;

use std::time::Instant;

pub use checks::{check_ids, find, CheckDef, Ctx, CHECKS};
pub use config::{ReportFormat, SuiteConfig};
pub use report::{emit_report, from_json, render, to_csv, to_json, CheckRecord, Report, Verdict};

use crate::exec::with_threads;
use crate::Result;

/// Perturbation used by the negative control.
pub const NEGATIVE_CONTROL_EPS: f64 = 1e-3;

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs one check. Errors become a failing record carrying the message.
pub fn run_check(def: &CheckDef, ctx: &Ctx) -> CheckRecord {
    let start = Instant::now();
    let tol = ctx.cfg.tol(def.id, def.tol);
    let outcome = (def.run)(ctx);
    let wall = start.elapsed().as_secs_f64();
    let (samples, max, med, error) = match outcome {
        Ok(mut res) if !res.is_empty() => {
            let max = res.iter().copied().fold(f64::NEG_INFINITY, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) });
            let n = res.len();
            (n, max, median(&mut res), None)
        }
        Ok(_) => (0, f64::NAN, f64::NAN, Some("no samples".to_string())),
        Err(e) => (0, f64::NAN, f64::NAN, Some(e.to_string())),
    };
    let verdict = if error.is_none() && max <= tol { Verdict::Pass } else { Verdict::Fail };
    CheckRecord {
        check: def.id.into(),
        criterion: def.criterion,
        name: def.name.into(),
        claim: def.claim.into(),
        samples,
        residual_max: max,
        residual_median: med,
        tol,
        verdict,
        error,
        wall_time_s: Some(wall),
    }
}

/// Runs every enabled check in registry order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let ctx = Ctx { cfg, exec: cfg.execution };
    let checks = with_threads(cfg.threads, || {
        CHECKS.iter().filter(|d| cfg.enabled(d.id)).map(|d| run_check(d, &ctx)).collect::<Vec<_>>()
    })?;
    let mut report = Report::empty(cfg.clone());
    report.checks = checks;
    Ok(report)
}

/// The twistor check under `g_a + ε·dx₁dx₂`; it is expected to fail.
pub fn negative_control(cfg: &SuiteConfig) -> Result<Report> {
    let cfg = SuiteConfig {
        perturbation: Some(NEGATIVE_CONTROL_EPS),
        only: Some(["c05_twistor_psi_bc".to_string()].into()),
        skip: Default::default(),
        ..cfg.clone()
    };
    run_suite(&cfg)
}
