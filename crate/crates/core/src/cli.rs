//! Deterministic command-line front end: runs experiments and emits CSV/JSON
//! with fixed formatting (17 significant digits, `\n` line endings).
//!
//! Exit codes: 0 success, 1 numerical failure, 2 validation failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds;
use crate::dynamics::{evolve_reduced, final_fidelity};
use crate::model::PathSpec;
use crate::numerics::Tolerance;
use crate::oracle;
use crate::scheduler::{scan_alpha, synthesize, ProblemSpec, Schedule};

const ASYMPTOTE: f64 = 1.0 + std::f64::consts::FRAC_PI_2;

/// 17 significant digits, locale-independent.
fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Parser)]
#[command(name = "adsearch", about = "Adiabatic quantum search laboratory", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate f, g, E±, ω and the coupling M on a uniform s-grid.
    Spectrum(SpectrumArgs),
    /// Minimum running time for one (N, A) pair.
    Tmin(TminArgs),
    /// Scan ε·T_min over lists of N and α (A = N^α).
    Scan(ScanArgs),
    /// Integrate an evolution and emit the P₋(t) trace.
    Evolve(EvolveArgs),
    /// Run the all-marked-states overlap-sum and oracle-action audit.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Engine {
    Reduced,
    Full,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// key=value config file; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Path coefficient A (mutually exclusive with --alpha).
    #[arg(long)]
    a: Option<f64>,
    /// Sets A = N^alpha (mutually exclusive with --a).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct TminArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Comma-separated list of database sizes.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated list of exponents α (A = N^α).
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    /// Trace sample count (uniform in t).
    #[arg(long)]
    samples: Option<usize>,
    /// Sudden quench (total time 1e-6) instead of the saturating schedule.
    #[arg(long)]
    sudden: bool,
    /// Linear ramp with the given total time instead of the saturating schedule.
    #[arg(long)]
    total_time: Option<f64>,
    /// Evolve under H - E₋(t)·I (full engine only).
    #[arg(long)]
    shift_ground: bool,
    /// Marked index for the full engine.
    #[arg(long)]
    m: Option<usize>,
    /// Minimum schedule grid size.
    #[arg(long)]
    grid: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Audit the sudden quench (total time 1e-6).
    #[arg(long)]
    sudden: bool,
    /// Scale the saturating schedule's total time by this factor.
    #[arg(long)]
    time_factor: Option<f64>,
    /// Also write the overlap matrix as CSV to this path.
    #[arg(long)]
    overlap_out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Validation failure (exit 2) vs numerical failure (exit 1).
#[derive(Debug)]
enum CliError {
    Validation(String),
    Numerical(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Domain(_)
            | crate::Error::DimensionMismatch { .. }
            | crate::Error::CapExceeded { .. } => CliError::Validation(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Tmin(args) => cmd_tmin(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Audit(args) => cmd_audit(args),
    }
}

/// key=value config file; '#' starts a comment line.
fn load_config(path: &Option<PathBuf>) -> CliResult<HashMap<String, String>> {
    let mut map = HashMap::new();
    if let Some(path) = path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("bad config line: {line}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(map)
}

fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    config: &HashMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.get(key) {
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("config key {key}: cannot parse {raw:?}"))),
        None => Ok(None),
    }
}

fn require<T>(v: Option<T>, key: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Validation(format!("missing required parameter --{key}")))
}

/// Resolve (A, α) from the mutually exclusive --a / --alpha pair.
fn resolve_coefficient(n: usize, a: Option<f64>, alpha: Option<f64>) -> CliResult<(f64, f64)> {
    match (a, alpha) {
        (Some(_), Some(_)) => Err(CliError::Validation("--a and --alpha are mutually exclusive".into())),
        (Some(a), None) => {
            let alpha = if a > 0.0 && n > 2 { a.ln() / (n as f64).ln() } else { f64::NAN };
            Ok((a, alpha))
        }
        // α = 0 selects the plain linear path, matching the scan baseline.
        (None, Some(alpha)) => {
            let a = if alpha == 0.0 { 0.0 } else { (n as f64).powf(alpha) };
            Ok((a, alpha))
        }
        (None, None) => Ok((0.0, 0.0)),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> CliResult<Vec<T>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| CliError::Validation(format!("bad {what} list entry: {tok:?}")))
        })
        .collect()
}

fn make_path(n: usize, a: f64) -> CliResult<PathSpec> {
    Ok(if a == 0.0 { PathSpec::linear(n)? } else { PathSpec::quadratic(n, a)? })
}

fn cmd_spectrum(args: SpectrumArgs) -> CliResult<()> {
    let config = load_config(&args.common.config)?;
    let n = require(resolve(args.n, &config, "n")?, "n")?;
    let a_flag = resolve(args.a, &config, "a")?;
    let alpha_flag = resolve(args.alpha, &config, "alpha")?;
    let samples = resolve(args.samples, &config, "samples")?.unwrap_or(101);
    if samples < 2 {
        return Err(CliError::Validation(format!("samples must be ≥ 2, got {samples}")));
    }
    let (a, _) = resolve_coefficient(n, a_flag, alpha_flag)?;
    let path = make_path(n, a)?;
    let format = args.common.format.unwrap_or(Format::Csv);

    let points: crate::Result<Vec<_>> = (0..samples)
        .map(|i| path.spectrum_at(i as f64 / (samples - 1) as f64))
        .collect();
    let points = points?;

    let content = match format {
        Format::Csv => {
            let mut out = String::from("s,f,g,E_minus,E_plus,omega,M\n");
            for p in &points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    fmt_f(p.s),
                    fmt_f(p.f),
                    fmt_f(p.g),
                    fmt_f(p.e_minus),
                    fmt_f(p.e_plus),
                    fmt_f(p.omega),
                    fmt_f(p.m)
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|p| {
                    json!({
                        "s": p.s, "f": p.f, "g": p.g,
                        "E_minus": p.e_minus, "E_plus": p.e_plus,
                        "omega": p.omega, "M": p.m,
                    })
                })
                .collect();
            let doc = json!({ "schema": "spectrum", "N": n, "A": a, "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    write_output(&args.common.out, &content)
}

fn cmd_tmin(args: TminArgs) -> CliResult<()> {
    let config = load_config(&args.common.config)?;
    let n = require(resolve(args.n, &config, "n")?, "n")?;
    let a_flag = resolve(args.a, &config, "a")?;
    let alpha_flag = resolve(args.alpha, &config, "alpha")?;
    let (a, alpha) = resolve_coefficient(n, a_flag, alpha_flag)?;
    let format = args.common.format.unwrap_or(Format::Csv);

    let path = make_path(n, a)?;
    // ε·T_min is ε-independent; any valid ε gives the same product.
    let spec = ProblemSpec::new(path, 0.5)?;
    let eps_t_min = 0.5 * spec.t_min()?;

    let content = match format {
        Format::Csv => format!(
            "N,alpha,A,eps_Tmin\n{},{},{},{}\n",
            n,
            fmt_f(alpha),
            fmt_f(a),
            fmt_f(eps_t_min)
        ),
        Format::Json => {
            let doc = json!({
                "schema": "tmin",
                "N": n, "alpha": alpha, "A": a,
                "eps_Tmin": eps_t_min,
                "constant_time_asymptote": ASYMPTOTE,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    write_output(&args.common.out, &content)
}

fn cmd_scan(args: ScanArgs) -> CliResult<()> {
    let config = load_config(&args.common.config)?;
    let n_raw = require(resolve(args.n, &config, "n")?, "n")?;
    let alpha_raw = require(resolve(args.alpha, &config, "alpha")?, "alpha")?;
    let eps = resolve(args.eps, &config, "eps")?.unwrap_or(0.01);
    let n_list: Vec<usize> = parse_list(&n_raw, "N")?;
    let alpha_list: Vec<f64> = parse_list(&alpha_raw, "alpha")?;
    let format = args.common.format.unwrap_or(Format::Csv);

    let cells = scan_alpha(&n_list, &alpha_list, eps);
    let all_failed = !cells.is_empty() && cells.iter().all(|c| c.eps_t_min.is_err());

    let content = match format {
        Format::Csv => {
            let mut out = String::from("N,alpha,A,eps_Tmin\n");
            for c in &cells {
                let value = match &c.eps_t_min {
                    Ok(v) => fmt_f(*v),
                    Err(_) => "nan".to_string(),
                };
                let _ = writeln!(out, "{},{},{},{}", c.n, fmt_f(c.alpha), fmt_f(c.a), value);
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = cells
                .iter()
                .map(|c| match &c.eps_t_min {
                    Ok(v) => json!({"N": c.n, "alpha": c.alpha, "A": c.a, "eps_Tmin": v}),
                    Err(e) => json!({"N": c.n, "alpha": c.alpha, "A": c.a, "error": e}),
                })
                .collect();
            let doc = json!({
                "schema": "scan",
                "epsilon": eps,
                "constant_time_asymptote": ASYMPTOTE,
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    write_output(&args.common.out, &content)?;
    if all_failed {
        return Err(CliError::Numerical("all scan cells failed".into()));
    }
    Ok(())
}

fn build_schedule(spec: &ProblemSpec, sudden: bool, total_time: Option<f64>, grid: usize) -> CliResult<Schedule> {
    match (sudden, total_time) {
        (true, Some(_)) => {
            Err(CliError::Validation("--sudden and --total-time are mutually exclusive".into()))
        }
        (true, None) => Ok(Schedule::ramp(1e-6)?),
        (false, Some(t)) => Ok(Schedule::ramp(t)?),
        (false, None) => Ok(Schedule::Synthesized(synthesize(spec, grid)?)),
    }
}

fn cmd_evolve(args: EvolveArgs) -> CliResult<()> {
    let config = load_config(&args.common.config)?;
    let n = require(resolve(args.n, &config, "n")?, "n")?;
    let a_flag = resolve(args.a, &config, "a")?;
    let alpha_flag = resolve(args.alpha, &config, "alpha")?;
    let eps = resolve(args.eps, &config, "eps")?.unwrap_or(0.01);
    let samples = resolve(args.samples, &config, "samples")?.unwrap_or(1000);
    let grid = resolve(args.grid, &config, "grid")?.unwrap_or(256);
    let engine = args.engine.unwrap_or(Engine::Reduced);
    let m = resolve(args.m, &config, "m")?.unwrap_or(0);
    let (a, _) = resolve_coefficient(n, a_flag, alpha_flag)?;
    let format = args.common.format.unwrap_or(Format::Csv);

    if args.shift_ground && engine == Engine::Reduced {
        return Err(CliError::Validation("--shift-ground requires --engine full".into()));
    }

    let path = make_path(n, a)?;
    let spec = ProblemSpec::new(path, eps)?;
    let schedule = build_schedule(&spec, args.sudden, args.total_time, grid)?;

    // Rows of (t, s, P₋, E₋, ω) plus the final fidelity.
    let (rows, fidelity, total_time) = match engine {
        Engine::Reduced => {
            let trace = evolve_reduced(&spec, &schedule, samples)?;
            let fidelity = final_fidelity(&trace)?;
            let rows: Vec<[f64; 5]> = trace
                .samples
                .iter()
                .map(|p| [p.t, p.s, p.p_minus, p.e_minus, p.omega])
                .collect();
            (rows, fidelity, trace.total_time)
        }
        Engine::Full => {
            let tol = Tolerance::ode();
            let trace = if args.shift_ground {
                oracle::evolve_shifted(spec.path(), &schedule, m, &tol, samples)?
            } else {
                oracle::evolve_full(spec.path(), &schedule, m, &tol, samples)?
            };
            let rows: Vec<[f64; 5]> = trace
                .samples
                .iter()
                .map(|p| {
                    let pt = spec.path().spectrum_at(p.s).expect("sampled s in range");
                    [p.t, p.s, p.p_ground, pt.e_minus, pt.omega]
                })
                .collect();
            let fidelity = trace.final_state.marked_probability();
            (rows, fidelity, trace.total_time)
        }
    };

    let min_p_minus = rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    let content = match format {
        Format::Csv => {
            let mut out = String::from("t,s,P_minus,E_minus,omega\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f(r[0]),
                    fmt_f(r[1]),
                    fmt_f(r[2]),
                    fmt_f(r[3]),
                    fmt_f(r[4])
                );
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "schema": "evolve_summary",
                "N": n, "A": a, "epsilon": eps,
                "engine": match engine { Engine::Reduced => "reduced", Engine::Full => "full" },
                "shift_ground": args.shift_ground,
                "total_time": total_time,
                "final_fidelity": fidelity,
                "final_eps_t": eps * total_time,
                "min_P_minus": min_p_minus,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    write_output(&args.common.out, &content)
}

fn cmd_audit(args: AuditArgs) -> CliResult<()> {
    let config = load_config(&args.common.config)?;
    let n = require(resolve(args.n, &config, "n")?, "n")?;
    let a_flag = resolve(args.a, &config, "a")?;
    let alpha_flag = resolve(args.alpha, &config, "alpha")?;
    let eps = resolve(args.eps, &config, "eps")?.unwrap_or(0.01);
    let (a, _) = resolve_coefficient(n, a_flag, alpha_flag)?;

    let path = make_path(n, a)?;
    let spec = ProblemSpec::new(path, eps)?;
    let mut schedule = build_schedule(&spec, args.sudden, None, 64)?;
    if let Some(factor) = args.time_factor {
        schedule = schedule.time_scaled(factor)?;
    }

    let (report, matrix) = bounds::audit_theorem(spec.path(), &schedule, &Tolerance::ode())?;

    let doc = json!({
        "schema": "audit",
        "A": a,
        "epsilon": eps,
        "sqrt_n_over_4": (n as f64).sqrt() / 4.0,
        "report": report,
    });
    write_output(&args.common.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;

    if let Some(overlap_out) = &args.overlap_out {
        let mut csv = String::new();
        let header: Vec<String> = (0..matrix.n).map(|m| format!("m{m}")).collect();
        let _ = writeln!(csv, "{}", header.join(","));
        for m in 0..matrix.n {
            let row: Vec<String> = (0..matrix.n).map(|mp| fmt_f(matrix.get(m, mp))).collect();
            let _ = writeln!(csv, "{}", row.join(","));
        }
        write_output(&Some(overlap_out.clone()), &csv)?;
    }
    Ok(())
}
