//! `verify`: run the suite, probe regularity across the light cone, or print
//! tensor components at a point.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use twistor_core::curvature::{christoffel_at, curvature_values_at};
use twistor_core::exec::Execution;
use twistor_core::geometry::{metric_components, MetricSpec, Point};
use twistor_core::jets::DIM;
use twistor_core::regularity::{ga_class, monomial_class, smoothness_probe, MonomialSpec, ScalarField, MAX_ORDER};
use twistor_core::verify::checks::random_cone_curves;
use twistor_core::verify::sample::derive_seed;
use twistor_core::verify::{negative_control, render, run_suite, to_json, ReportFormat, SuiteConfig, Verdict};

#[derive(Parser)]
#[command(name = "verify", version, about = "Numerical verification of twistor spinors on C¹ metrics g_a")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

// Parsed once per process; boxing the larger variant buys nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand)]
enum Command {
    /// Run the check suite and emit a report.
    Run(RunArgs),
    /// Classify the smoothness of a field across the light cone along random curves.
    ProbeC1(ProbeArgs),
    /// Print tensor components of a metric at a point.
    Tensor(TensorArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter `a > 0` of the metric family.
    #[arg(long)]
    a: Option<f64>,
    /// Base sample count per check.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed of the sampler.
    #[arg(long)]
    seed: Option<u64>,
    /// Parameters `(b, c)` of the twistor spinor.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Per-check tolerance, `CHECK=F`; repeatable.
    #[arg(long = "tol-override", value_name = "CHECK=F")]
    tol_override: Vec<String>,
    /// Half-width of the excluded bands around the light cone, the axis and the outer boundary.
    #[arg(long)]
    exclude: Option<f64>,
    /// Run only checks matching these ids or prefixes such as `c05`.
    #[arg(long)]
    only: Vec<String>,
    /// Skip checks matching these ids or prefixes.
    #[arg(long)]
    skip: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// `json` or `csv`.
    #[arg(long)]
    format: Option<String>,
    /// Cap on worker threads.
    #[arg(long, env = "VERIFY_THREADS")]
    threads: Option<usize>,
    /// Evaluate points sequentially.
    #[arg(long)]
    sequential: bool,
    /// Keep per-check wall times in the JSON report (breaks byte stability).
    #[arg(long)]
    timings: bool,
    /// Run the twistor check under a perturbed metric instead; it should fail.
    #[arg(long)]
    negative_control: bool,
}

#[derive(clap::Args)]
struct ProbeArgs {
    /// `ga`, `ro2` or `monomial:m,l_r,l_0,l_1,l_2,l_3,l_4`.
    #[arg(long)]
    field: String,
    #[arg(long, default_value_t = 10)]
    curves: usize,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecName {
    G0,
    Ga,
    Gatilde,
    Ha,
    Eh,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Metric,
    Ricci,
    Weyl,
    Christoffel,
}

#[derive(clap::Args)]
struct TensorArgs {
    #[arg(long, value_enum)]
    spec: SpecName,
    /// `x0,x1,x2,x3,x4`; four-dimensional metrics use `x1..x4`.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, value_enum, default_value = "metric")]
    what: What,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::ProbeC1(args) => probe(args).map(|()| true),
        Command::Tensor(args) => tensor(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn build_config(args: &RunArgs) -> Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(v) = args.a {
        cfg.a = v;
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.b {
        cfg.b = v;
    }
    if let Some(v) = args.c {
        cfg.c = v;
    }
    if let Some(v) = args.exclude {
        cfg.exclude = v;
    }
    for item in &args.tol_override {
        let (id, tol) = item.split_once('=').ok_or_else(|| anyhow!("expected CHECK=F, got {item:?}"))?;
        let tol: f64 = tol.parse().with_context(|| format!("bad tolerance in {item:?}"))?;
        cfg.tol_overrides.insert(id.to_string(), tol);
    }
    if !args.only.is_empty() {
        cfg.only = Some(args.only.iter().cloned().collect::<BTreeSet<_>>());
    }
    cfg.skip.extend(args.skip.iter().cloned());
    if let Some(p) = &args.report {
        cfg.report = Some(p.clone());
    }
    if let Some(f) = &args.format {
        cfg.format = f.parse()?;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if args.sequential {
        cfg.execution = Execution::Sequential;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<bool> {
    let cfg = build_config(&args)?;
    let report = if args.negative_control { negative_control(&cfg)? } else { run_suite(&cfg)? };
    for c in &report.checks {
        let note = c.error.as_deref().map(|e| format!("  ({e})")).unwrap_or_default();
        eprintln!(
            "{:<4} {:<34} max {:.3e}  median {:.3e}  tol {:.1e}{note}",
            c.verdict, c.check, c.residual_max, c.residual_median, c.tol
        );
    }
    let failed = report.checks.iter().filter(|c| c.verdict == Verdict::Fail).count();
    eprintln!("{} checks, {failed} failed", report.checks.len());
    let text = match cfg.format {
        ReportFormat::Json => to_json(&report, args.timings)?,
        ReportFormat::Csv => render(&report, ReportFormat::Csv)?,
    };
    match &cfg.report {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(failed == 0)
}

enum ProbeField {
    Ga,
    RoSquared,
    Monomial(MonomialSpec),
}

fn parse_field(s: &str) -> Result<ProbeField> {
    match s {
        "ga" => Ok(ProbeField::Ga),
        "ro2" => Ok(ProbeField::RoSquared),
        _ => {
            let rest = s.strip_prefix("monomial:").ok_or_else(|| anyhow!("unknown field {s:?}"))?;
            let nums: Vec<u32> = rest
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("bad monomial {rest:?}"))?;
            if nums.len() != 7 {
                bail!("monomial needs m and six exponents l_r,l_0..l_4, got {} numbers", nums.len());
            }
            let l = [nums[1], nums[2], nums[3], nums[4], nums[5], nums[6]];
            Ok(ProbeField::Monomial(MonomialSpec::new(nums[0], l)?))
        }
    }
}

fn probe(args: ProbeArgs) -> Result<()> {
    let field = parse_field(&args.field)?;
    if args.curves == 0 {
        bail!("--curves must be at least 1");
    }
    let curves = random_cone_curves(derive_seed(args.seed, "probe-c1"), args.a, args.curves)?;
    for (i, curve) in curves.iter().enumerate() {
        let class = match &field {
            ProbeField::Ga => ga_class(curve, args.a)?,
            ProbeField::RoSquared => smoothness_probe(&ScalarField::RoSquared, curve, MAX_ORDER, args.a)?.class(),
            ProbeField::Monomial(spec) => {
                smoothness_probe(&ScalarField::Monomial(*spec), curve, MAX_ORDER, args.a)?.class()
            }
        };
        println!("curve {i:>3} base {:?}: {class:?}", curve.base.x);
    }
    if let ProbeField::Monomial(spec) = &field {
        println!(
            "including the origin: {:?}; predicted C^{} (k = {})",
            monomial_class(spec, args.a)?,
            spec.predicted_class(),
            spec.predicted_k()
        );
    }
    Ok(())
}

fn parse_point(s: &str) -> Result<Point> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad point {s:?}"))?;
    let x: [f64; DIM] =
        v.try_into().map_err(|v: Vec<f64>| anyhow!("point needs {DIM} coordinates, got {}", v.len()))?;
    Ok(Point::new(x))
}

fn spec_of(name: SpecName, a: f64) -> MetricSpec {
    match name {
        SpecName::G0 => MetricSpec::minkowski(),
        SpecName::Ga => MetricSpec::ga(a),
        SpecName::Gatilde => MetricSpec::ga_tilde(a),
        SpecName::Ha => MetricSpec::ha(a),
        SpecName::Eh => MetricSpec::eguchi_hanson(a),
    }
}

fn tensor(args: TensorArgs) -> Result<()> {
    let p = parse_point(&args.point)?;
    let spec = spec_of(args.spec, args.a);
    let n = spec.dim();
    // Four-dimensional metrics live on x1..x4; label indices accordingly.
    let base = DIM - n;
    match args.what {
        What::Metric => {
            let g = metric_components(&spec, &p)?;
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| format!("{:>24.16e}", g.g[i][j].value)).collect();
                println!("g[{}] {}", i + base, row.join(" "));
            }
        }
        What::Ricci => {
            let cb = curvature_values_at(&spec, &p)?;
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| format!("{:>24.16e}", cb.ricci[i][j].value)).collect();
                println!("Ric[{}] {}", i + base, row.join(" "));
            }
        }
        What::Weyl => {
            let w = curvature_values_at(&spec, &p)?.weyl;
            for a in 0..n {
                for b in (a + 1)..n {
                    for c in 0..n {
                        for d in (c + 1)..n {
                            let v = w.value(a, b, c, d);
                            if v != 0.0 {
                                println!("W[{},{},{},{}] = {v:.16e}", a + base, b + base, c + base, d + base);
                            }
                        }
                    }
                }
            }
        }
        What::Christoffel => {
            let chr = christoffel_at(&spec, &p)?;
            for k in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let v = chr.value(k, i, j);
                        if v != 0.0 {
                            println!("Γ[{}][{},{}] = {v:.16e}", k + base, i + base, j + base);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
