//! Command-line front end: argument parsing, sweeps and table emission.
//!
//! All inputs are dimensionless in natural units (hbar = c = m = 1).
//!
//! Exit codes: 0 success, 2 configuration error, 3 some grid points failed,
//! 4 analytic/oracle validation failed.

use crate::bound_states::{find_bound_states, trace_spectrum, SpectrumTrace};
use crate::error::Error;
use crate::model::CuspPotential;
use crate::oracle::{oracle_bound_energies, oracle_rt, OdeProblem, Parity, DEFAULT_TOL};
use crate::scattering::{
    reflection_transmission, scan_resonances_vs_strength, sweep_energy, ResonanceScan, SweepPoint,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DKP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dkp-cusp", version, about = "DKP scattering and bound states in a cusp potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection and transmission over an energy grid.
    Scatter(ScatterArgs),
    /// Transmission versus barrier strength at fixed energy, with peaks.
    ResonanceScan(ResonanceArgs),
    /// Lowest bound-state curve E(V0) of the well and its turning point.
    BoundSpectrum(SpectrumArgs),
    /// Compare analytic results with direct ODE integration.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Barrier,
    Well,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// R and T on an energy grid (barrier).
    Scatter,
    /// Bound-state energies on a well-depth grid.
    Bound,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
    /// Oracle integration tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub v0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub e_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub e_max: f64,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "barrier")]
    pub kind: Kind,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ResonanceArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub e: f64,
    #[arg(long)]
    pub v_min: f64,
    #[arg(long)]
    pub v_max: f64,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub v_min: f64,
    #[arg(long)]
    pub v_max: f64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "well")]
    pub kind: Kind,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "scatter")]
    pub quantity: Quantity,
    #[arg(long)]
    pub a: f64,
    /// Barrier strength (scatter validation).
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e_max: Option<f64>,
    /// Well depths (bound validation).
    #[arg(long)]
    pub v_min: Option<f64>,
    #[arg(long)]
    pub v_max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest accepted |analytic - oracle|.
    #[arg(long, default_value_t = 1e-5)]
    pub max_diff: f64,
    #[command(flatten)]
    pub out: Output,
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_CONFIG, e.to_string())
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure(EXIT_CONFIG, msg.into())
}

/// Fixed-width scientific formatting: 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        "NaN".to_string()
    }
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Rendered table plus the exit status it implies.
struct Report {
    text: String,
    status: i32,
}

/// Parses `args` (including the program name), runs the command and writes
/// the table to `stdout` or the `--output` file. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return code;
        }
    };
    let result = pool.install(|| execute(&cli.command));
    match result {
        Ok(report) => {
            let out = output_of(&cli.command);
            let written = match &out.output {
                Some(path) => std::fs::write(path, &report.text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout
                    .write_all(report.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_CONFIG;
            }
            report.status
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| config(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| config(format!("thread pool: {e}")))
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Scatter(a) => &a.out,
        Command::ResonanceScan(a) => &a.out,
        Command::BoundSpectrum(a) => &a.out,
        Command::Validate(a) => &a.out,
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Scatter(args) => run_scatter(args),
        Command::ResonanceScan(args) => run_resonance_scan(args),
        Command::BoundSpectrum(args) => run_bound_spectrum(args),
        Command::Validate(args) => run_validate(args),
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if !(tol >= crate::oracle::MIN_TOL && tol <= crate::oracle::MAX_TOL) {
        return Err(config(format!(
            "--tol {tol:e} outside [{:e}, {:e}]",
            crate::oracle::MIN_TOL,
            crate::oracle::MAX_TOL
        )));
    }
    Ok(())
}

fn run_scatter(args: &ScatterArgs) -> Result<Report, Failure> {
    check_tol(args.out.tol)?;
    if args.kind != Kind::Barrier {
        return Err(config("scatter requires --kind barrier"));
    }
    let pot = CuspPotential::barrier(args.a, args.v0)?;
    let points = sweep_energy(&pot, args.e_min, args.e_max, args.n)?;
    let failed = points.iter().filter(|p| p.outcome.is_err()).count();
    let max_defect = points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok())
        .map(|r| r.unitarity_defect())
        .fold(0.0, f64::max);
    let text = match args.out.format {
        Format::Csv => scatter_csv(&points, max_defect),
        Format::Json => to_json(json!({
            "command": "scatter",
            "a": args.a,
            "v0": args.v0,
            "rows": points.iter().map(scatter_row_json).collect::<Vec<_>>(),
            "max_unitarity_defect": max_defect,
            "failed_points": failed,
        })),
    };
    Ok(Report {
        text,
        status: if failed > 0 { EXIT_PARTIAL } else { EXIT_OK },
    })
}

fn scatter_csv(points: &[SweepPoint], max_defect: f64) -> String {
    let mut s = String::from("E,R,T,unitarity_defect,status\n");
    for p in points {
        match &p.outcome {
            Ok(r) => writeln!(
                s,
                "{},{},{},{},ok",
                fmt_num(p.e),
                fmt_num(r.r),
                fmt_num(r.t),
                fmt_num(r.unitarity_defect())
            ),
            Err(e) => writeln!(s, "{},NaN,NaN,NaN,{}", fmt_num(p.e), e.code()),
        }
        .expect("writing to a String");
    }
    writeln!(s, "# max_unitarity_defect {}", fmt_num(max_defect)).expect("writing to a String");
    s
}

fn scatter_row_json(p: &SweepPoint) -> Value {
    match &p.outcome {
        Ok(r) => json!({
            "E": p.e, "R": json_num(r.r), "T": json_num(r.t),
            "unitarity_defect": json_num(r.unitarity_defect()), "status": "ok",
        }),
        Err(e) => json!({
            "E": p.e, "R": null, "T": null, "unitarity_defect": null, "status": e.code(),
        }),
    }
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable value");
    s.push('\n');
    s
}

fn run_resonance_scan(args: &ResonanceArgs) -> Result<Report, Failure> {
    check_tol(args.out.tol)?;
    let scan = scan_resonances_vs_strength(args.a, args.e, args.v_min, args.v_max, args.n)?;
    let failed = scan.failures();
    let text = match args.out.format {
        Format::Csv => resonance_csv(&scan),
        Format::Json => to_json(json!({
            "command": "resonance-scan",
            "a": args.a,
            "e": args.e,
            "rows": scan.samples.iter().map(|s| match &s.t {
                Ok(t) => json!({"V0": s.param, "T": json_num(*t), "status": "ok"}),
                Err(e) => json!({"V0": s.param, "T": null, "status": e.code()}),
            }).collect::<Vec<_>>(),
            "peaks": scan.peaks.iter().map(|p| json!({"V0": p.param, "T": p.t})).collect::<Vec<_>>(),
            "spacings": scan.spacings,
            "asymptotic_spacing": scan.asymptotic_spacing(),
            "failed_points": failed,
        })),
    };
    Ok(Report {
        text,
        status: if failed > 0 { EXIT_PARTIAL } else { EXIT_OK },
    })
}

fn resonance_csv(scan: &ResonanceScan) -> String {
    let mut s = String::from("V0,T,status\n");
    for sample in &scan.samples {
        match &sample.t {
            Ok(t) => writeln!(s, "{},{},ok", fmt_num(sample.param), fmt_num(*t)),
            Err(e) => writeln!(s, "{},NaN,{}", fmt_num(sample.param), e.code()),
        }
        .expect("writing to a String");
    }
    if scan.peaks.is_empty() {
        s.push_str("# no peaks\n");
    }
    for p in &scan.peaks {
        writeln!(s, "# peak V0={} T={}", fmt_num(p.param), fmt_num(p.t)).expect("writing to a String");
    }
    for d in &scan.spacings {
        writeln!(s, "# spacing {}", fmt_num(*d)).expect("writing to a String");
    }
    if let Some(d) = scan.asymptotic_spacing() {
        writeln!(s, "# asymptotic_spacing {}", fmt_num(d)).expect("writing to a String");
    }
    s
}

fn run_bound_spectrum(args: &SpectrumArgs) -> Result<Report, Failure> {
    check_tol(args.out.tol)?;
    if args.kind != Kind::Well {
        return Err(config("bound-spectrum requires --kind well"));
    }
    let trace = trace_spectrum(args.a, args.v_min, args.v_max, args.n)?;
    let text = match args.out.format {
        Format::Csv => spectrum_csv(&trace),
        Format::Json => to_json(json!({
            "command": "bound-spectrum",
            "a": args.a,
            "rows": trace.points.iter()
                .map(|p| json!({"V0": p.v0, "E": p.e, "residual": p.residual}))
                .collect::<Vec<_>>(),
            "turning_point": trace.turning_point.map(|t| json!({
                "V0": t.v0, "E": t.e, "root_count_change": t.root_count_change,
                "confidence": if t.confident { "high" } else { "low" },
            })),
        })),
    };
    Ok(Report { text, status: EXIT_OK })
}

fn spectrum_csv(trace: &SpectrumTrace) -> String {
    let mut s = String::from("V0,E,residual\n");
    for p in &trace.points {
        writeln!(s, "{},{},{}", fmt_num(p.v0), fmt_num(p.e), fmt_num(p.residual))
            .expect("writing to a String");
    }
    match trace.turning_point {
        Some(t) => writeln!(
            s,
            "# turning_point V0={} E={} root_count_change={} confidence={}",
            fmt_num(t.v0),
            fmt_num(t.e),
            t.root_count_change,
            if t.confident { "high" } else { "low" }
        )
        .expect("writing to a String"),
        None => s.push_str("# turning_point none\n"),
    }
    s
}

/// One analytic/oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub quantity: &'static str,
    pub param: f64,
    pub analytic: f64,
    pub oracle: f64,
}

impl Comparison {
    pub fn abs_diff(&self) -> f64 {
        (self.analytic - self.oracle).abs()
    }
}

fn run_validate(args: &ValidateArgs) -> Result<Report, Failure> {
    check_tol(args.out.tol)?;
    if !(args.max_diff > 0.0) {
        return Err(config("--max-diff must be > 0"));
    }
    let (rows, failed) = match args.quantity {
        Quantity::Scatter => validate_scatter(args)?,
        Quantity::Bound => validate_bound(args)?,
    };
    // NaN compares false, so a missing partner counts as a failure
    let worst = rows.iter().map(Comparison::abs_diff).fold(0.0, |m: f64, d| {
        if d.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(d)
        }
    });
    let pass = failed == 0 && worst <= args.max_diff;
    let text = match args.out.format {
        Format::Csv => validate_csv(&rows, worst, args.max_diff, pass),
        Format::Json => to_json(json!({
            "command": "validate",
            "rows": rows.iter().map(|c| json!({
                "quantity": c.quantity, "param": c.param, "analytic": json_num(c.analytic),
                "oracle": json_num(c.oracle), "abs_diff": json_num(c.abs_diff()),
            })).collect::<Vec<_>>(),
            "max_abs_diff": json_num(worst),
            "max_diff": args.max_diff,
            "failed_points": failed,
            "pass": pass,
        })),
    };
    Ok(Report {
        text,
        status: if pass { EXIT_OK } else { EXIT_VALIDATION },
    })
}

fn validate_csv(rows: &[Comparison], worst: f64, max_diff: f64, pass: bool) -> String {
    let mut s = String::from("param,analytic,oracle,abs_diff\n");
    let mut current = "";
    for c in rows {
        if c.quantity != current {
            current = c.quantity;
            writeln!(s, "# quantity {current}").expect("writing to a String");
        }
        writeln!(
            s,
            "{},{},{},{}",
            fmt_num(c.param),
            fmt_num(c.analytic),
            fmt_num(c.oracle),
            fmt_num(c.abs_diff())
        )
        .expect("writing to a String");
    }
    writeln!(s, "# max_abs_diff {}", fmt_num(worst)).expect("writing to a String");
    writeln!(
        s,
        "# result {} (max_diff {})",
        if pass { "pass" } else { "fail" },
        fmt_num(max_diff)
    )
    .expect("writing to a String");
    s
}

fn validate_scatter(args: &ValidateArgs) -> Result<(Vec<Comparison>, usize), Failure> {
    let v0 = args.v0.ok_or_else(|| config("scatter validation needs --v0"))?;
    let e_min = args.e_min.unwrap_or(1.05);
    let e_max = args.e_max.unwrap_or(10.0);
    let pot = CuspPotential::barrier(args.a, v0)?;
    let grid = crate::scattering::uniform_grid(e_min, e_max, args.n.unwrap_or(50))?;
    if !(e_min > 1.0 || e_max < -1.0) {
        return Err(config("scatter validation needs a grid in |E| > 1"));
    }
    let base = OdeProblem::new(pot, grid[0])?.with_tol(args.out.tol)?;
    let pairs: Vec<_> = grid
        .par_iter()
        .map(|&e| {
            let analytic = reflection_transmission(e, &pot);
            let oracle = oracle_rt(&OdeProblem { e, ..base });
            (e, analytic, oracle)
        })
        .collect();
    let mut failed = 0;
    let mut r_rows = Vec::new();
    let mut t_rows = Vec::new();
    for (e, analytic, oracle) in pairs {
        let (ar, at) = analytic.map(|r| (r.r, r.t)).unwrap_or((f64::NAN, f64::NAN));
        let (or, ot) = oracle.map(|o| (o.r, o.t)).unwrap_or((f64::NAN, f64::NAN));
        if ar.is_nan() || or.is_nan() {
            failed += 1;
        }
        r_rows.push(Comparison { quantity: "R", param: e, analytic: ar, oracle: or });
        t_rows.push(Comparison { quantity: "T", param: e, analytic: at, oracle: ot });
    }
    r_rows.extend(t_rows);
    Ok((r_rows, failed))
}

fn validate_bound(args: &ValidateArgs) -> Result<(Vec<Comparison>, usize), Failure> {
    let v_min = args.v_min.unwrap_or(0.1);
    let v_max = args.v_max.unwrap_or(3.6);
    let depths = crate::scattering::uniform_grid(v_min, v_max, args.n.unwrap_or(10))?;
    CuspPotential::well(args.a, v_max)?;
    if !(v_min > 0.0) {
        return Err(config("--v-min must be > 0"));
    }
    let tol = args.out.tol;
    let per_depth: Vec<_> = depths
        .par_iter()
        .map(|&v0| {
            let well = CuspPotential::well(args.a, v0)?;
            let analytic = find_bound_states(&well, crate::bound_states::TRACE_ENERGY_GRID)?;
            let oracle = oracle_bound_energies(&well, tol)?;
            Ok((v0, analytic, oracle))
        })
        .collect();
    let mut rows = Vec::new();
    let mut failed = 0;
    for item in per_depth {
        let (v0, analytic, oracle): (f64, Vec<_>, Vec<_>) = match item {
            Ok(t) => t,
            Err::<_, Error>(_) => {
                failed += 1;
                continue;
            }
        };
        let even: Vec<f64> = oracle
            .iter()
            .filter(|s| s.parity == Parity::Even)
            .map(|s| s.e)
            .collect();
        if even.len() != analytic.len() {
            failed += 1;
        }
        for s in &analytic {
            let partner = even
                .iter()
                .copied()
                .min_by(|x, y| (x - s.e).abs().total_cmp(&(y - s.e).abs()))
                .unwrap_or(f64::NAN);
            rows.push(Comparison { quantity: "E", param: v0, analytic: s.e, oracle: partner });
        }
        for &e in &even {
            if !analytic.iter().any(|s| (s.e - e).abs() < 1e-4) {
                rows.push(Comparison { quantity: "E", param: v0, analytic: f64::NAN, oracle: e });
            }
        }
    }
    Ok((rows, failed))
}
