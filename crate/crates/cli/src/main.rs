//! `recap`: capacities and asymmetry data for reciprocal channel pairs.
//!
//! Subcommands:
//! - `capacity`  evaluate one capacity of one channel (JSON report)
//! - `scan`      depolarizing capacities over the full parameter window (CSV)
//! - `asymmetry` asymmetry ratios over the reciprocal window per dimension (CSV)
//! - `wcc-grid`  maximum asymmetry ratio over the qubit Weyl-mixture simplex (CSV)
//! - `verify`    run the self-check suites (JSON summary)
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
//! 3 unsupported request, 4 complete-positivity violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recap_core::capacities::{
    asymmetry_ratio_dc, asymmetry_ratio_wcc_ea, c_ea_dc, c_ua_dc, cp_range_wcc, lambda_min_dc,
    q_ea, CapacityKind, CapacityMethod, CapacityReport,
};
use recap_core::error::Error;
use recap_core::spec::ChannelSpec;
use recap_core::states::{shannon_entropy, ProbabilityVector};
use recap_core::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "recap", version, about = "Capacities of reciprocal quantum-channel pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Ua,
    Ea,
    Qea,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one capacity of the channel described by a JSON spec.
    Capacity {
        /// Channel spec as inline JSON or @path to a JSON file.
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate both depolarizing capacities over the admissible window.
    Scan {
        #[arg(long)]
        d: usize,
        /// Number of grid points (inclusive of both endpoints).
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate asymmetry ratios over the reciprocal window per dimension.
    Asymmetry {
        /// Dimensions, comma separated (each in 2..=10).
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the qubit Weyl-mixture simplex for the maximum asymmetry ratio.
    WccGrid {
        /// Points per simplex axis (at least 5).
        #[arg(long, default_value_t = 21)]
        resolution: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::LambdaOutOfRange { .. } | Error::NotCompletelyPositive(_) => 4,
        _ => 2,
    }
}

fn core_failure(err: Error) -> Failure {
    Failure::new(exit_code_for(&err), err.to_string())
}

/// Twelve significant digits, scientific; NaN and infinities spelled out.
fn fmt12(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_spec(arg: &str) -> Result<ChannelSpec, Failure> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path)
            .map_err(|e| Failure::new(2, format!("cannot read {path}: {e}")))?
    } else {
        arg.to_string()
    };
    ChannelSpec::from_json(&text).map_err(core_failure)
}

fn cmd_capacity(spec_arg: &str, kind: KindArg, out: &Option<PathBuf>) -> Result<(), Failure> {
    let spec = load_spec(spec_arg)?;
    let value = match kind {
        KindArg::Ua => match &spec {
            ChannelSpec::Dc { d, lambda, .. } => {
                if *d < 2 {
                    return Err(Failure::new(2, format!("dimension {d} is too small")));
                }
                c_ua_dc(*d, *lambda).map_err(core_failure)?
            }
            _ => {
                return Err(Failure::new(
                    3,
                    "unassisted capacity is only supported for depolarizing specs: \
                     additivity of the minimum output entropy is unproven for general \
                     Weyl-covariant channels beyond d=2",
                ));
            }
        },
        KindArg::Ea | KindArg::Qea => {
            let (d, p) = spec.effective_weyl_mixture().map_err(core_failure)?;
            let c_ea = 2.0 * (d as f64).log2() - shannon_entropy(&p);
            match kind {
                KindArg::Qea => q_ea(c_ea).map_err(core_failure)?,
                _ => c_ea,
            }
        }
    };
    let report = CapacityReport {
        channel_desc: spec.to_json(),
        kind: match kind {
            KindArg::Ua => CapacityKind::Unassisted,
            KindArg::Ea => CapacityKind::EntanglementAssisted,
            KindArg::Qea => CapacityKind::QuantumEntanglementAssisted,
        },
        value,
        method: CapacityMethod::ClosedForm,
    };
    let line = serde_json::to_string(&report).expect("report serializes");
    emit(out, &format!("{line}\n"))
}

#[derive(Serialize)]
struct ScanRow {
    lambda: f64,
    c_ua: f64,
    c_ea: f64,
}

fn cmd_scan(
    d: usize,
    grid: usize,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if d < 2 {
        return Err(Failure::new(2, format!("dimension {d} is too small")));
    }
    if grid < 2 {
        return Err(Failure::new(2, "scan needs at least 2 grid points"));
    }
    let lo = lambda_min_dc(d);
    let rows: Vec<ScanRow> = (0..grid)
        .map(|k| {
            let lambda = lo + (1.0 - lo) * k as f64 / (grid - 1) as f64;
            // Clamp the last point onto the endpoint exactly.
            let lambda = if k == grid - 1 { 1.0 } else { lambda };
            ScanRow {
                lambda,
                c_ua: c_ua_dc(d, lambda).expect("grid stays in range"),
                c_ea: c_ea_dc(d, lambda).expect("grid stays in range"),
            }
        })
        .collect();
    let content = match format {
        FormatArg::Csv => {
            let mut s = String::from("lambda,c_ua,c_ea\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    fmt12(r.lambda),
                    fmt12(r.c_ua),
                    fmt12(r.c_ea)
                ));
            }
            s
        }
        FormatArg::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&rows).expect("rows serialize")
        ),
    };
    emit(out, &content)
}

#[derive(Serialize)]
struct AsymmetryRow {
    d: usize,
    abs_lambda: f64,
    /// Absent for d=2, where the unassisted asymmetry is identically zero.
    a_ua: Option<f64>,
    a_ea: f64,
}

fn cmd_asymmetry(
    dims: &[usize],
    grid: usize,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if dims.is_empty() {
        return Err(Failure::new(2, "at least one dimension required"));
    }
    if grid < 2 {
        return Err(Failure::new(2, "asymmetry scan needs at least 2 grid points"));
    }
    for &d in dims {
        if !(2..=10).contains(&d) {
            return Err(Failure::new(2, format!("dimension {d} outside 2..=10")));
        }
    }
    let mut rows = Vec::new();
    for &d in dims {
        let edge = lambda_min_dc(d).abs();
        for k in 1..=grid {
            let x = edge * k as f64 / grid as f64;
            let a_ea = asymmetry_ratio_dc(d, x, CapacityKind::EntanglementAssisted)
                .map_err(core_failure)?;
            let a_ua = if d == 2 {
                None
            } else {
                Some(asymmetry_ratio_dc(d, x, CapacityKind::Unassisted).map_err(core_failure)?)
            };
            rows.push(AsymmetryRow {
                d,
                abs_lambda: x,
                a_ua,
                a_ea,
            });
        }
    }
    let content = match format {
        FormatArg::Csv => {
            let mut s = String::from("d,abs_lambda,a_ua,a_ea\n");
            for r in &rows {
                let ua = r.a_ua.map(fmt12).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.d,
                    fmt12(r.abs_lambda),
                    ua,
                    fmt12(r.a_ea)
                ));
            }
            s
        }
        FormatArg::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&rows).expect("rows serialize")
        ),
    };
    emit(out, &content)
}

#[derive(Serialize)]
struct SimplexRow {
    q1: f64,
    q2: f64,
    q3: f64,
    max_ratio: f64,
}

fn cmd_wcc_grid(
    resolution: usize,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if resolution < 5 {
        return Err(Failure::new(2, "resolution must be at least 5"));
    }
    let d = 2;
    let step = 1.0 / (resolution - 1) as f64;
    let mut rows = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            for k in 0..resolution {
                let q1 = i as f64 * step;
                let q2 = j as f64 * step;
                let q3 = k as f64 * step;
                let q0 = 1.0 - q1 - q2 - q3;
                if q0 < -1e-12 {
                    continue;
                }
                let q = ProbabilityVector::new(vec![q0.max(0.0), q1, q2, q3])
                    .expect("grid point is a distribution");
                let bound = cp_range_wcc(&q, d)
                    .expect("window exists for every distribution")
                    .reciprocal_bound;
                let max_ratio = if bound.is_finite() {
                    asymmetry_ratio_wcc_ea(&q, d, bound).unwrap_or(f64::NAN)
                } else {
                    f64::NAN
                };
                rows.push(SimplexRow {
                    q1,
                    q2,
                    q3,
                    max_ratio,
                });
            }
        }
    }
    let content = match format {
        FormatArg::Csv => {
            let mut s = String::from("q1,q2,q3,max_ratio\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt12(r.q1),
                    fmt12(r.q2),
                    fmt12(r.q3),
                    fmt12(r.max_ratio)
                ));
            }
            s
        }
        FormatArg::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&rows).expect("rows serialize")
        ),
    };
    emit(out, &content)
}

fn cmd_verify(suite: SuiteArg, seed: u64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let report = run_suite(
        match suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::Full => Suite::Full,
        },
        seed,
    );
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    emit(out, &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::new(
            1,
            format!("{} of {} checks failed", report.failed, report.total),
        ))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Capacity { spec, kind, out } => cmd_capacity(spec, *kind, out),
        Command::Scan {
            d,
            grid,
            format,
            out,
        } => cmd_scan(*d, *grid, *format, out),
        Command::Asymmetry {
            d,
            grid,
            format,
            out,
        } => cmd_asymmetry(d, *grid, *format, out),
        Command::WccGrid {
            resolution,
            format,
            out,
        } => cmd_wcc_grid(*resolution, *format, out),
        Command::Verify { suite, seed, out } => cmd_verify(*suite, *seed, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
