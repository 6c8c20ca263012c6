//! Subcommand definitions and their implementations.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cureplim::curve::uniform_grid;
use cureplim::{
    default_grid, default_pilot_k, mise_decompose, nw_weights, optimal_bandwidth_scan,
    pilot_bandwidth, select_bandwidth, survival_beran, survival_c, survival_kaplan_meier,
    survival_kernel_nocensor, survival_unconditional_c, BandwidthSearch, EstimatorKind, Kernel,
    KernelSpec, OrderedSample, Scenario, ScenarioSpec, StepCurve, SurvivalRecord, WeightVector,
};

use crate::config::{flag_or_config, ConfigMap};
use crate::error::CliError;
use crate::io;

const EXACT: f64 = 1e-12;
/// Quadrature size for every internal MISE integral (bootstrap selection).
const MISE_GRID_POINTS: usize = 100;

#[derive(Parser)]
#[command(
    name = "cureplim",
    version,
    about = "Survival curve estimation for right-censored data with verified-cured subjects",
    after_help = "Thread count can be capped with the RAYON_NUM_THREADS environment \
                  variable; results are identical for every value."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a survival curve from a dataset and emit it as `t,value` CSV
    Estimate(EstimateArgs),
    /// Select a bandwidth by bootstrap and emit the `h,mise_star` profile
    Bandwidth(BandwidthArgs),
    /// Monte Carlo scenario experiments with bias/variance/MISE decomposition
    Simulate(SimulateArgs),
    /// Verify the estimator reductions applicable to a dataset
    ReduceCheck(ReduceCheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Cure-informed conditional product-limit estimator
    Proposed,
    /// Beran's conditional estimator (ignores cure labels)
    Beran,
    /// Kaplan-Meier (unconditional, ignores cure labels)
    Km,
    /// Cure-informed unconditional estimator
    Unconditional,
    /// True curve (simulate only; diagnostic)
    Oracle,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Proposed => "proposed",
            MethodArg::Beran => "beran",
            MethodArg::Km => "km",
            MethodArg::Unconditional => "unconditional",
            MethodArg::Oracle => "oracle",
        }
    }
}

impl FromStr for MethodArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "proposed" => Ok(MethodArg::Proposed),
            "beran" => Ok(MethodArg::Beran),
            "km" => Ok(MethodArg::Km),
            "unconditional" => Ok(MethodArg::Unconditional),
            "oracle" => Ok(MethodArg::Oracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Epanechnikov,
    Uniform,
}

impl KernelArg {
    fn name(self) -> &'static str {
        match self {
            KernelArg::Epanechnikov => "epanechnikov",
            KernelArg::Uniform => "uniform",
        }
    }
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Kernel {
        match k {
            KernelArg::Epanechnikov => Kernel::Epanechnikov,
            KernelArg::Uniform => Kernel::Uniform,
        }
    }
}

impl FromStr for KernelArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "epanechnikov" => Ok(KernelArg::Epanechnikov),
            "uniform" => Ok(KernelArg::Uniform),
            other => Err(format!("unknown kernel `{other}`")),
        }
    }
}

/// Bootstrap-search flags shared by `estimate --auto-bandwidth` and
/// `bandwidth`.
#[derive(Args, Clone)]
struct SearchFlags {
    /// Smallest candidate bandwidth (default: covariate span / 20)
    #[arg(long)]
    h_min: Option<f64>,
    /// Largest candidate bandwidth (default: covariate span / 2)
    #[arg(long)]
    h_max: Option<f64>,
    /// Number of log-spaced candidates
    #[arg(long)]
    grid_points: Option<usize>,
    /// Bootstrap resamples per candidate
    #[arg(long)]
    replicates: Option<usize>,
    /// Pilot bandwidth (default: nearest-neighbor rule at x)
    #[arg(long)]
    pilot: Option<f64>,
    /// Neighbor count for the pilot rule (default: n / 4)
    #[arg(long)]
    pilot_k: Option<usize>,
    /// Left end of the error-weighting window (default: 0)
    #[arg(long)]
    a: Option<f64>,
    /// Right end of the error-weighting window (default: largest event time)
    #[arg(long)]
    b: Option<f64>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input CSV with header `x,time,status`
    #[arg(long)]
    data: Option<PathBuf>,
    /// Covariate value to estimate at (conditional methods)
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Fixed bandwidth (conditional methods)
    #[arg(long)]
    h: Option<f64>,
    /// Choose the bandwidth by bootstrap instead of `--h`
    #[arg(long)]
    auto_bandwidth: bool,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// RNG seed (recorded in the output; used by `--auto-bandwidth`)
    #[arg(long)]
    seed: Option<u64>,
    /// Right end of the output time grid (default: largest observed time)
    #[arg(long)]
    t_max: Option<f64>,
    /// Output grid size
    #[arg(long)]
    t_points: Option<usize>,
    #[command(flatten)]
    search: SearchFlags,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key=value` config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Keep going when rows are malformed (rejects are still reported)
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct BandwidthArgs {
    #[arg(long)]
    data: Option<PathBuf>,
    /// Covariate value the bandwidth is selected for
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario id: 1 (logistic cure) or 2 (cubic cure)
    #[arg(long)]
    scenario: Option<u8>,
    /// Sample size per replicate
    #[arg(long)]
    n: Option<usize>,
    /// Probability that a cured subject is identified
    #[arg(long)]
    pi: Option<f64>,
    /// Covariate values, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    /// Fixed bandwidth (alternative to `--scan`)
    #[arg(long)]
    h: Option<f64>,
    /// Scan a bandwidth grid instead of fixing `--h`
    #[arg(long)]
    scan: bool,
    /// Smallest scanned bandwidth (default per scenario)
    #[arg(long)]
    h_min: Option<f64>,
    /// Largest scanned bandwidth (default per scenario)
    #[arg(long)]
    h_max: Option<f64>,
    /// Number of scanned bandwidths
    #[arg(long)]
    grid_points: Option<usize>,
    /// Monte Carlo replicates
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceCheckArgs {
    #[arg(long)]
    data: Option<PathBuf>,
    /// Covariate value for the conditional comparisons (default: a median
    /// data point)
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Bandwidth for the conditional comparisons (default: covariate span / 4)
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lenient: bool,
}

/// Parse `argv` and run; returns the process exit code.
pub fn dispatch<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code.clamp(0, u8::MAX as i32) as u8;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(args) => run_estimate(args),
        Command::Bandwidth(args) => run_bandwidth(args),
        Command::Simulate(args) => run_simulate(args),
        Command::ReduceCheck(args) => run_reduce_check(args),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigMap, CliError> {
    match path {
        Some(p) => ConfigMap::load(p),
        None => Ok(ConfigMap::empty()),
    }
}

fn load_records(
    data: Option<PathBuf>,
    cfg: &ConfigMap,
    lenient: bool,
) -> Result<(PathBuf, Vec<SurvivalRecord>), CliError> {
    let path: PathBuf = flag_or_config(data, cfg, "data")?
        .ok_or_else(|| CliError::Config("missing --data".into()))?;
    let file = io::parse_dataset(&path)?;
    for d in &file.diagnostics {
        eprintln!("warning: {}:{}: {}", path.display(), d.line, d.message);
    }
    if !file.diagnostics.is_empty() && !lenient {
        return Err(CliError::RejectedRows {
            path: path.display().to_string(),
            count: file.diagnostics.len(),
        });
    }
    Ok((path, file.records))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Config(format!("missing --{flag}")))
}

fn covariate_span(xs: &[f64]) -> (f64, f64) {
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

struct ResolvedSearch {
    search: BandwidthSearch,
    meta: Vec<(String, String)>,
}

fn resolve_search(
    flags: &SearchFlags,
    cfg: &ConfigMap,
    sample: &OrderedSample,
    x: f64,
) -> Result<ResolvedSearch, CliError> {
    let xs = sample.covariates();
    let (lo, hi) = covariate_span(&xs);
    let span = hi - lo;
    if !span.is_finite() || span <= 0.0 {
        return Err(CliError::Config(
            "all covariates are identical; bandwidth selection is undefined".into(),
        ));
    }
    let h_min = flag_or_config(flags.h_min, cfg, "h-min")?.unwrap_or(span / 20.0);
    let h_max = flag_or_config(flags.h_max, cfg, "h-max")?.unwrap_or(span / 2.0);
    let grid_points = flag_or_config(flags.grid_points, cfg, "grid-points")?.unwrap_or(30);
    let replicates = flag_or_config(flags.replicates, cfg, "replicates")?.unwrap_or(500);
    let pilot_k =
        flag_or_config(flags.pilot_k, cfg, "pilot-k")?.unwrap_or_else(|| default_pilot_k(xs.len()));
    let pilot = match flag_or_config(flags.pilot, cfg, "pilot")? {
        Some(g) => g,
        None => pilot_bandwidth(&xs, x, pilot_k)?,
    };
    let a = flag_or_config(flags.a, cfg, "a")?.unwrap_or(0.0);
    let b = match flag_or_config(flags.b, cfg, "b")? {
        Some(b) => b,
        None => sample.max_event_time().unwrap_or_else(|| sample.max_time()),
    };
    if !a.is_finite() || !b.is_finite() || b <= a {
        return Err(CliError::Config(format!(
            "error window must satisfy a < b, got ({a}, {b})"
        )));
    }
    let grid = default_grid(h_min, h_max, grid_points)?;
    let search = BandwidthSearch::new(grid, replicates, pilot, (a, b), MISE_GRID_POINTS)?;
    let meta = vec![
        ("h_min".into(), format!("{h_min}")),
        ("h_max".into(), format!("{h_max}")),
        ("grid_points".into(), format!("{grid_points}")),
        ("replicates".into(), format!("{replicates}")),
        ("pilot".into(), format!("{pilot}")),
        ("a".into(), format!("{a}")),
        ("b".into(), format!("{b}")),
    ];
    Ok(ResolvedSearch { search, meta })
}

fn run_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let lenient = args.lenient || cfg.get_bool("lenient")?;
    let (path, records) = load_records(args.data, &cfg, lenient)?;
    let method = flag_or_config(args.method, &cfg, "method")?.unwrap_or(MethodArg::Proposed);
    if method == MethodArg::Oracle {
        return Err(CliError::Config(
            "--method oracle is only available in `simulate`".into(),
        ));
    }
    let kernel = flag_or_config(args.kernel, &cfg, "kernel")?.unwrap_or(KernelArg::Epanechnikov);
    let seed = flag_or_config(args.seed, &cfg, "seed")?.unwrap_or(1);
    let t_points = flag_or_config(args.t_points, &cfg, "t-points")?.unwrap_or(100);
    if t_points < 2 {
        return Err(CliError::Config("--t-points must be at least 2".into()));
    }

    let sample = OrderedSample::new(records.clone())?;
    let t_max = flag_or_config(args.t_max, &cfg, "t-max")?.unwrap_or_else(|| sample.max_time());
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Config(
            "--t-max must be positive (all observed times are zero?)".into(),
        ));
    }
    let grid = uniform_grid(0.0, t_max, t_points);

    let mut meta: Vec<(String, String)> = vec![
        ("command".into(), "estimate".into()),
        ("data".into(), path.display().to_string()),
        ("method".into(), method.name().into()),
        ("seed".into(), format!("{seed}")),
        ("t_max".into(), format!("{t_max}")),
        ("t_points".into(), format!("{t_points}")),
    ];

    let curve = match method {
        MethodArg::Km => survival_kaplan_meier(&records)?,
        MethodArg::Unconditional => survival_unconditional_c(&records)?,
        MethodArg::Proposed | MethodArg::Beran => {
            let x = require(flag_or_config(args.x, &cfg, "x")?, "x")?;
            let auto = args.auto_bandwidth || cfg.get_bool("auto-bandwidth")?;
            let fixed_h = flag_or_config(args.h, &cfg, "h")?;
            let h = match (auto, fixed_h) {
                (true, Some(_)) => {
                    return Err(CliError::Config(
                        "--h and --auto-bandwidth are mutually exclusive".into(),
                    ))
                }
                (false, None) => {
                    return Err(CliError::Config(
                        "conditional methods need --h or --auto-bandwidth".into(),
                    ))
                }
                (false, Some(h)) => h,
                (true, None) => {
                    let resolved = resolve_search(&args.search, &cfg, &sample, x)?;
                    let (h_star, _) =
                        select_bandwidth(&sample, x, &resolved.search, kernel.into(), seed)?;
                    meta.extend(resolved.meta);
                    meta.push(("auto_bandwidth".into(), "true".into()));
                    h_star
                }
            };
            meta.push(("kernel".into(), kernel.name().into()));
            meta.push(("x".into(), format!("{x}")));
            meta.push(("h".into(), format!("{h}")));
            let spec = KernelSpec::new(kernel.into(), h)?;
            let weights = nw_weights(&spec, &sample.covariates(), x)?;
            if method == MethodArg::Proposed {
                survival_c(&sample, &weights)
            } else {
                survival_beran(&sample, &weights)
            }
        }
        MethodArg::Oracle => unreachable!("rejected above"),
    };

    io::write_output(args.out.as_deref(), &io::render_curve(&curve, &grid, &meta))
}

fn run_bandwidth(args: BandwidthArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let lenient = args.lenient || cfg.get_bool("lenient")?;
    let (path, records) = load_records(args.data, &cfg, lenient)?;
    let x = require(flag_or_config(args.x, &cfg, "x")?, "x")?;
    let kernel = flag_or_config(args.kernel, &cfg, "kernel")?.unwrap_or(KernelArg::Epanechnikov);
    let seed = flag_or_config(args.seed, &cfg, "seed")?.unwrap_or(1);

    let sample = OrderedSample::new(records)?;
    let resolved = resolve_search(&args.search, &cfg, &sample, x)?;
    let (h_star, profile) = select_bandwidth(&sample, x, &resolved.search, kernel.into(), seed)?;

    let mut meta: Vec<(String, String)> = vec![
        ("command".into(), "bandwidth".into()),
        ("data".into(), path.display().to_string()),
        ("x".into(), format!("{x}")),
        ("kernel".into(), kernel.name().into()),
        ("seed".into(), format!("{seed}")),
    ];
    meta.extend(resolved.meta);
    meta.push(("h_star".into(), format!("{h_star}")));

    let rows: Vec<Vec<f64>> = profile
        .bandwidths()
        .iter()
        .zip(profile.mise_star())
        .map(|(&h, &m)| vec![h, m])
        .collect();
    io::write_output(
        args.out.as_deref(),
        &io::render_csv(&meta, "h,mise_star", &rows),
    )
}

fn method_to_kind(method: MethodArg) -> EstimatorKind {
    match method {
        MethodArg::Proposed => EstimatorKind::Proposed,
        MethodArg::Beran => EstimatorKind::Beran,
        MethodArg::Km => EstimatorKind::KaplanMeier,
        MethodArg::Unconditional => EstimatorKind::Unconditional,
        MethodArg::Oracle => EstimatorKind::Oracle,
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let scenario_id = require(flag_or_config(args.scenario, &cfg, "scenario")?, "scenario")?;
    let scenario = Scenario::from_id(scenario_id)?;
    let n = flag_or_config(args.n, &cfg, "n")?.unwrap_or(100);
    let pi = flag_or_config(args.pi, &cfg, "pi")?.unwrap_or(0.8);
    let replicates = flag_or_config(args.replicates, &cfg, "replicates")?.unwrap_or(1000);
    let method = flag_or_config(args.method, &cfg, "method")?.unwrap_or(MethodArg::Proposed);
    let kernel = flag_or_config(args.kernel, &cfg, "kernel")?.unwrap_or(KernelArg::Epanechnikov);
    let seed = flag_or_config(args.seed, &cfg, "seed")?.unwrap_or(1);

    let xs: Vec<f64> = if args.x.is_empty() {
        match cfg.get::<String>("x")? {
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("config key `x`: bad value `{s}`")))
                })
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        }
    } else {
        args.x.clone()
    };
    if xs.is_empty() {
        return Err(CliError::Config(
            "missing --x (one or more covariate values)".into(),
        ));
    }

    let spec = ScenarioSpec::new(scenario, pi, n)?;
    let kind = method_to_kind(method);
    let conditional = matches!(kind, EstimatorKind::Proposed | EstimatorKind::Beran);
    let scan = args.scan || cfg.get_bool("scan")?;

    let mut meta: Vec<(String, String)> = vec![
        ("command".into(), "simulate".into()),
        ("scenario".into(), format!("{scenario_id}")),
        ("n".into(), format!("{n}")),
        ("pi".into(), format!("{pi}")),
        ("method".into(), method.name().into()),
        ("kernel".into(), kernel.name().into()),
        ("replicates".into(), format!("{replicates}")),
        ("seed".into(), format!("{seed}")),
    ];

    let mut lines = Vec::new();
    if scan {
        let (def_lo, def_hi) = match scenario {
            Scenario::One => (3.0, 20.0),
            Scenario::Two => (4.0, 100.0),
        };
        let h_min = flag_or_config(args.h_min, &cfg, "h-min")?.unwrap_or(def_lo);
        let h_max = flag_or_config(args.h_max, &cfg, "h-max")?.unwrap_or(def_hi);
        let grid_points = flag_or_config(args.grid_points, &cfg, "grid-points")?.unwrap_or(100);
        let grid = default_grid(h_min, h_max, grid_points)?;
        meta.push(("h_min".into(), format!("{h_min}")));
        meta.push(("h_max".into(), format!("{h_max}")));
        meta.push(("grid_points".into(), format!("{grid_points}")));
        for &x in &xs {
            let (h_opt, reports) =
                optimal_bandwidth_scan(&spec, x, &grid, kernel.into(), kind, replicates, seed)?;
            meta.push((format!("h_opt_at_{x}"), format!("{h_opt}")));
            for r in reports {
                lines.push(report_line(&r));
            }
        }
    } else {
        let h = if conditional {
            require(flag_or_config(args.h, &cfg, "h")?, "h (or --scan)")?
        } else {
            // unconditional methods ignore the bandwidth; echo zero
            flag_or_config(args.h, &cfg, "h")?.unwrap_or(0.0)
        };
        for &x in &xs {
            let r = mise_decompose(&spec, x, h, kernel.into(), kind, replicates, seed)?;
            lines.push(report_line(&r));
        }
    }

    let mut out = String::new();
    for (k, v) in &meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str("x,h,ibias2,ivar,mise,replicates\n");
    for line in lines {
        out.push_str(&line);
    }
    io::write_output(args.out.as_deref(), &out)
}

fn report_line(r: &cureplim::MiseReport) -> String {
    format!(
        "{},{},{},{},{},{}\n",
        io::fmt_value(r.x),
        io::fmt_value(r.h),
        io::fmt_value(r.ibias2),
        io::fmt_value(r.ivar),
        io::fmt_value(r.mise),
        r.replicates
    )
}

fn run_reduce_check(args: ReduceCheckArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let lenient = args.lenient || cfg.get_bool("lenient")?;
    let (path, records) = load_records(args.data, &cfg, lenient)?;
    let kernel = flag_or_config(args.kernel, &cfg, "kernel")?.unwrap_or(KernelArg::Epanechnikov);

    let sample = OrderedSample::new(records.clone())?;
    let mut xs = sample.covariates();
    xs.sort_unstable_by(f64::total_cmp);
    let x = flag_or_config(args.x, &cfg, "x")?.unwrap_or(xs[xs.len() / 2]);
    let (lo, hi) = covariate_span(&xs);
    let default_h = if hi > lo { (hi - lo) / 4.0 } else { 1.0 };
    let h = flag_or_config(args.h, &cfg, "h")?.unwrap_or(default_h);

    let spec = KernelSpec::new(kernel.into(), h)?;
    let weights = nw_weights(&spec, &sample.covariates(), x)?;
    let uniform = WeightVector::uniform(sample.len(), x)?;

    let points = check_points(&records);
    let diff = |a: &StepCurve, b: &StepCurve| -> f64 {
        points
            .iter()
            .map(|&t| (a.eval(t) - b.eval(t)).abs())
            .fold(0.0, f64::max)
    };

    let no_cured = records.iter().all(|r| !r.outcome.is_cured());
    let all_event = records.iter().all(|r| r.outcome.is_event());
    let min_cured = records
        .iter()
        .filter(|r| r.outcome.is_cured())
        .map(|r| r.time)
        .fold(f64::INFINITY, f64::min);
    let max_other = records
        .iter()
        .filter(|r| !r.outcome.is_cured())
        .map(|r| r.time)
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold_cured = !no_cured && min_cured >= max_other;

    // (name, applicable, observed gap)
    let mut checks: Vec<(&str, bool, Option<f64>)> = Vec::new();

    let informed = survival_c(&sample, &weights);
    let beran = survival_beran(&sample, &weights);
    checks.push((
        "no_cured_matches_beran",
        no_cured,
        no_cured.then(|| diff(&informed, &beran)),
    ));
    checks.push((
        "threshold_cured_matches_beran",
        threshold_cured,
        threshold_cured.then(|| diff(&informed, &beran)),
    ));
    checks.push((
        "all_event_matches_kernel_estimator",
        all_event,
        if all_event {
            Some(diff(
                &informed,
                &survival_kernel_nocensor(&sample, &weights)?,
            ))
        } else {
            None
        },
    ));
    let uncond = survival_unconditional_c(&records)?;
    checks.push((
        "uniform_weights_match_unconditional",
        true,
        Some(diff(&survival_c(&sample, &uniform), &uncond)),
    ));
    checks.push((
        "no_cured_unconditional_matches_km",
        no_cured,
        no_cured.then(|| diff(&uncond, &survival_kaplan_meier(&records).unwrap())),
    ));

    let meta: Vec<(String, String)> = vec![
        ("command".into(), "reduce-check".into()),
        ("data".into(), path.display().to_string()),
        ("x".into(), format!("{x}")),
        ("h".into(), format!("{h}")),
        ("kernel".into(), kernel.name().into()),
        ("tolerance".into(), format!("{EXACT:e}")),
    ];
    let mut out = String::new();
    for (k, v) in &meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str("reduction,applicable,max_abs_diff,pass\n");
    let mut failures = 0usize;
    for (name, applicable, gap) in &checks {
        match gap {
            Some(d) => {
                let pass = *d <= EXACT;
                if *applicable && !pass {
                    failures += 1;
                }
                out.push_str(&format!(
                    "{name},{applicable},{},{pass}\n",
                    io::fmt_value(*d)
                ));
            }
            None => out.push_str(&format!("{name},false,,\n")),
        }
    }
    io::write_output(args.out.as_deref(), &out)?;
    if failures > 0 {
        return Err(CliError::CheckFailed(failures));
    }
    Ok(())
}

fn check_points(records: &[SurvivalRecord]) -> Vec<f64> {
    let mut ts: Vec<f64> = records.iter().map(|r| r.time).collect();
    ts.sort_unstable_by(f64::total_cmp);
    let max = ts.last().copied().unwrap_or(0.0);
    let mut points = vec![0.0];
    for w in ts.windows(2) {
        points.push(0.5 * (w[0] + w[1]));
    }
    points.extend(ts);
    points.push(max + 1.0);
    points
}
