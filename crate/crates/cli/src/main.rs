mod config;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::FileConfig;
use unentangled::config::{DEFAULT_DIM_CAP, DIM_CAP_ENV};
use unentangled::criteria::{
    ghz_probe, theorem1_margin, theorem2_k1_margin, theorem2_margin, w_probe, w_probe_swapped, Aggregation, CriterionReport,
};
use unentangled::oracle::{check_equivalence, verify_proof_chain, CheckReport};
use unentangled::tensor::exchange::{factors_from_json, MatrixRecord};
use unentangled::tensor::{ComplexMatrix, DensityMatrix, ProductOperator, SiteDims};
use unentangled::thresholds::{
    boundary_csv, fmt_sig, pq_boundary_scan_with, table1, table1_csv, ScanConfig, Theorem2Form, WProbe, DEFAULT_TOL,
};

#[derive(Parser)]
#[command(name = "unentangled", version, about = "Certify that a multipartite state has fewer than k unentangled particles")]
struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest total Hilbert-space dimension accepted.
    #[arg(long, global = true, env = DIM_CAP_ENV)]
    dim_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a criterion on a state.
    #[command(after_help = spec::GRAMMAR)]
    Eval(EvalArgs),
    /// Theorem 1 thresholds for p·GHZ_n + (1-p)·I/2^n, as CSV.
    Table1 {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Theorem 2 detection boundary in the (p, q) plane, as CSV.
    Fig1(Fig1Args),
    /// Compare factorized terms with the doubled-space oracle and check every proof step.
    OracleCheck {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print a state spec as a JSON density matrix.
    #[command(after_help = spec::GRAMMAR)]
    State {
        #[arg(long)]
        rho: String,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// State spec or JSON file.
    #[arg(long)]
    rho: Option<String>,
    /// 1 or 2; both when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    theorem: Option<u8>,
    /// Every admissible k when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// ghz-probe, w-probe or w-probe-swapped.
    #[arg(long)]
    preset: Option<String>,
    /// Per-site factors of X (JSON array of records).
    #[arg(long)]
    x: Option<PathBuf>,
    /// Per-site factors of Y, for Theorem 1.
    #[arg(long)]
    y: Option<PathBuf>,
    /// Substitute operators ω_s, for Theorem 2.
    #[arg(long)]
    omega: Option<PathBuf>,
    /// Theorem 2 per-tuple form (k = 1 only).
    #[arg(long)]
    pairwise: bool,
    /// JSON lines output (default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Number of grid intervals on the fixed axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Only this k; 1..N-1 when omitted.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Use the σ-conjugated probe and bisect q along fixed p.
    #[arg(long)]
    swapped: bool,
    /// Per-tuple Theorem 2 form for the k = 1 curve.
    #[arg(long)]
    pairwise_k1: bool,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<unentangled::Error> for Failure {
    fn from(e: unentangled::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            print!("{out}");
            eprintln!("error: property check failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let cap = cli.dim_cap.or(file.dim_cap).unwrap_or(DEFAULT_DIM_CAP);
    if cap < 4 {
        return Err(anyhow!("dimension cap must be at least 4, got {cap}").into());
    }
    match cli.command {
        Command::Eval(args) => Ok(eval(args, &file.eval, cap)?),
        Command::Table1 { n, tol } => {
            let n = n.or(file.table1.n).unwrap_or(8);
            let rows = table1(n, tol.or(file.table1.tol).unwrap_or(DEFAULT_TOL))?;
            Ok(table1_csv(&rows))
        }
        Command::Fig1(args) => Ok(fig1(args, &file.fig1)?),
        Command::OracleCheck { trials, seed } => {
            let trials = trials.or(file.oracle_check.trials).unwrap_or(50);
            let seed = seed.or(file.oracle_check.seed).unwrap_or(1);
            oracle_check(trials, seed)
        }
        Command::State { rho } => {
            let rho = spec::parse_state(&rho, cap)?;
            Ok(serde_json::to_string(&MatrixRecord::from(&rho)).map_err(anyhow::Error::from)? + "\n")
        }
    }
}

// ---------------------------------------------------------------------------
// eval

enum Probe {
    T1(ProductOperator, ProductOperator),
    T2(ProductOperator, Vec<ComplexMatrix>),
}

fn read_factors(path: &std::path::Path) -> Result<Vec<ComplexMatrix>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    factors_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn product_from_file(path: &std::path::Path, dims: &SiteDims) -> Result<ProductOperator> {
    Ok(ProductOperator::new(dims.clone(), read_factors(path)?).with_context(|| format!("factors in {}", path.display()))?)
}

fn uniform_dim(dims: &SiteDims, preset: &str) -> Result<usize> {
    dims.common_dim().ok_or_else(|| anyhow!("{preset} needs equal local dimensions, got {:?}", dims.as_slice()))
}

fn probes(args: &EvalArgs, preset: Option<&str>, theorem: u8, dims: &SiteDims) -> Result<Probe> {
    let n = dims.n();
    if theorem == 1 {
        return match (&args.x, &args.y) {
            (Some(x), Some(y)) => Ok(Probe::T1(product_from_file(x, dims)?, product_from_file(y, dims)?)),
            (None, None) => match preset.unwrap_or("ghz-probe") {
                "ghz-probe" => {
                    let (x, y) = ghz_probe(dims)?;
                    Ok(Probe::T1(x, y))
                }
                other => bail!("preset {other:?} is not a Theorem 1 probe (use ghz-probe or --x/--y)"),
            },
            _ => bail!("Theorem 1 needs both --x and --y"),
        };
    }
    match (&args.x, &args.omega) {
        (Some(x), Some(omega)) => Ok(Probe::T2(product_from_file(x, dims)?, read_factors(omega)?)),
        (None, None) => {
            let name = preset.unwrap_or("w-probe");
            let (x, omega) = match name {
                "w-probe" => w_probe(n, uniform_dim(dims, name)?)?,
                "w-probe-swapped" => w_probe_swapped(n, uniform_dim(dims, name)?)?,
                other => bail!("preset {other:?} is not a Theorem 2 probe (use w-probe, w-probe-swapped or --x/--omega)"),
            };
            Ok(Probe::T2(x, omega))
        }
        _ => bail!("Theorem 2 needs both --x and --omega"),
    }
}

fn evaluate(rho: &DensityMatrix, probe: &Probe, k: usize, pairwise: bool) -> unentangled::Result<CriterionReport> {
    match probe {
        Probe::T1(x, y) => theorem1_margin(rho, x, y, k),
        Probe::T2(x, omega) if pairwise => {
            if k != 1 {
                return Err(unentangled::Error::KOutOfRange { k, min: 1, max: 1 });
            }
            theorem2_k1_margin(rho, x, omega, Aggregation::Max)
        }
        Probe::T2(x, omega) => theorem2_margin(rho, x, omega, k),
    }
}

fn eval(args: EvalArgs, defaults: &config::EvalDefaults, cap: usize) -> Result<String> {
    let rho_spec = args.rho.clone().or_else(|| defaults.rho.clone()).ok_or_else(|| anyhow!("--rho is required"))?;
    let rho = spec::parse_state(&rho_spec, cap)?;
    let pairwise = args.pairwise || defaults.pairwise.unwrap_or(false);
    let preset = args.preset.as_deref().or(defaults.preset.as_deref());
    let theorems: Vec<u8> = match args.theorem.or(defaults.theorem) {
        Some(t @ (1 | 2)) => vec![t],
        Some(t) => bail!("--theorem must be 1 or 2, got {t}"),
        None if pairwise => vec![2],
        None if args.y.is_some() || preset == Some("ghz-probe") => vec![1],
        None if args.omega.is_some() || preset.is_some_and(|p| p.starts_with("w-probe")) => vec![2],
        None => vec![1, 2],
    };
    let n = rho.dims().n();
    let mut reports = Vec::new();
    for theorem in theorems {
        let probe = probes(&args, preset, theorem, rho.dims())?;
        let ks: Vec<usize> = match args.k.or(defaults.k) {
            Some(k) => vec![k],
            None if pairwise && theorem == 2 => vec![1],
            None => (1..n).collect(),
        };
        for k in ks {
            reports.push(evaluate(&rho, &probe, k, pairwise && theorem == 2)?);
        }
    }
    let csv = args.csv || (!args.json && defaults.csv.unwrap_or(false));
    Ok(if csv { reports_csv(&reports) } else { reports.iter().map(|r| r.to_json() + "\n").collect() })
}

fn reports_csv(reports: &[CriterionReport]) -> String {
    let mut out = String::from("theorem,k,lhs,rhs,margin,detected\n");
    for r in reports {
        let theorem = serde_json::to_value(r.theorem).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        out.push_str(&format!(
            "{theorem},{},{},{},{},{}\n",
            r.k,
            fmt_sig(r.lhs, 10),
            fmt_sig(r.rhs, 10),
            fmt_sig(r.margin, 10),
            r.detected
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// fig1 and oracle-check

fn fig1(args: Fig1Args, defaults: &config::Fig1Defaults) -> Result<String> {
    let n = args.n.or(defaults.n).unwrap_or(5);
    let d = args.d.or(defaults.d).unwrap_or(4);
    let grid = args.grid.or(defaults.grid).unwrap_or(200);
    let swapped = args.swapped || defaults.swapped.unwrap_or(false);
    let pairwise_k1 = args.pairwise_k1 || defaults.pairwise_k1.unwrap_or(false);
    let probe = if swapped { WProbe::Swapped } else { WProbe::Standard };
    let tol = args.tol.or(defaults.tol);
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    let mut points = Vec::new();
    for k in ks {
        let form = if pairwise_k1 && k == 1 { Theorem2Form::Pairwise } else { Theorem2Form::Summed };
        points.extend(pq_boundary_scan_with(n, d, k, grid, ScanConfig { probe, form, tol })?);
    }
    Ok(boundary_csv(&points, probe))
}

#[derive(Serialize)]
struct Equivalence {
    dims: Vec<usize>,
    report: CheckReport,
}

#[derive(Serialize)]
struct OracleSummary {
    passed: bool,
    equivalence: Vec<Equivalence>,
    proof_chain: CheckReport,
}

fn oracle_check(trials: usize, seed: u64) -> Result<String, Failure> {
    if trials == 0 {
        return Err(anyhow!("--trials must be positive").into());
    }
    let mut equivalence = Vec::new();
    for dims in [vec![2, 2], vec![2, 3], vec![3, 2]] {
        let report = check_equivalence(&SiteDims::new(dims.clone())?, trials, seed)?;
        equivalence.push(Equivalence { dims, report });
    }
    let proof_chain = verify_proof_chain(trials, seed)?;
    let passed = proof_chain.passed() && equivalence.iter().all(|e| e.report.passed());
    let summary = OracleSummary { passed, equivalence, proof_chain };
    let out = serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)? + "\n";
    if passed {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
