//! The `ewens-berry` command line.
//!
//! Exit status: 0 on success (vacuous or inapplicable bounds included),
//! 2 on usage errors, 3 on domain or resource errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, BERRY_ESSEEN_C};
use crate::error::Error;
use crate::exactdist::{self, LengthDistribution, StirlingTable};
use crate::gaussian::{self, Standardization, StandardizationKind};
use crate::moments::{self, SumId};
use crate::params::{EwensParams, Theta};
use crate::regimes::{self, Coupling, RegimeSpec, SweepOptions, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Column order of `sweep` CSV output. Changing it is a breaking change.
pub const SWEEP_CSV_HEADER: &str = "n,theta,log_n,kolmo_x,kolmo_y,kolmo_z,upper,lower_i,lower_ii,rate_normalizer,scaled_error,log_scaled_error,status";

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "ewens-berry",
    version,
    about = "Exact law of the Ewens partition length and its normal-approximation bounds"
)]
pub struct Cli {
    /// Optional key=value file presetting constants and grids; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub reproducible: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// pmf and CDF of K.
    Dist(DistArgs),
    /// Moment sums and their closed-form envelopes.
    Moments(PointArgs),
    /// γ values, conditions, bounds, and measured distances.
    Bounds(BoundsArgs),
    /// The critical ratio c*.
    Cstar(CstarArgs),
    /// Decay-rate sweep along a coupling θ = θ(n), written as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Stirling,
    PoissonBinomial,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub n: usize,
    /// Decimal, integer, or p/q. Integers and fractions enable exact output.
    #[arg(long)]
    pub theta: String,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value = "auto")]
    pub route: RouteArg,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Hall–Barbour constant (no published value; illustrative).
    #[arg(long = "D")]
    pub d: Option<f64>,
    /// Berry–Esseen constant.
    #[arg(long = "C")]
    pub c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CstarArgs {
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    Power,
    Ratio,
    Fixed,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub coupling: CouplingArg,
    /// Power coupling θ = a·n^p.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long)]
    pub p: Option<f64>,
    /// Ratio coupling θ = n/c.
    #[arg(long)]
    pub c: Option<f64>,
    /// Fixed coupling θ = theta0.
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Explicit comma-separated grid; overrides the geometric grid.
    #[arg(long)]
    pub n_values: Option<String>,
    #[arg(long = "D")]
    pub d: Option<f64>,
    #[arg(long = "C")]
    pub big_c: Option<f64>,
    #[arg(long, env = "EWENS_BERRY_JOBS")]
    pub jobs: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(msg) => CliError::Usage(msg),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parsed `key=value` presets.
#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

const CONFIG_KEYS: [&str; 9] = [
    "D",
    "C",
    "jobs",
    "tolerance",
    "n_min",
    "n_max",
    "points",
    "n_values",
    "format",
];

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return Err(format!("config line {}: unknown key {k:?}", lineno + 1));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Config::parse(&text).map_err(CliError::Usage)?
        }
        None => Config::default(),
    };
    let text = match &cli.command {
        Command::Dist(a) => cmd_dist(a, &config, cli.reproducible)?,
        Command::Moments(a) => cmd_moments(a, cli.reproducible)?,
        Command::Bounds(a) => cmd_bounds(a, &config, cli.reproducible)?,
        Command::Cstar(a) => cmd_cstar(a, &config)?,
        Command::Sweep(a) => {
            let csv = cmd_sweep(a, &config)?;
            if let Some(path) = &a.out {
                fs::write(path, &csv).map_err(|e| {
                    CliError::Domain(format!("cannot write {}: {e}", path.display()))
                })?;
                return Ok(());
            }
            csv
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Domain(format!("cannot write output: {e}")))
}

/// Fixed 17-significant-digit rendering, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn parse_point(p: &PointArgs) -> CliResult<EwensParams> {
    let theta: Theta = p.theta.parse()?;
    Ok(EwensParams::with_theta(p.n, theta)?)
}

fn envelope(command: &str, params_echo: Value, results: Value, reproducible: bool) -> String {
    let mut doc = json!({
        "command": command,
        "params_echo": params_echo,
        "results": results,
        "artifact_version": ARTIFACT_VERSION,
    });
    if !reproducible {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc["timestamp"] = json!(secs);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn distribution(params: &EwensParams, route: RouteArg) -> CliResult<LengthDistribution> {
    let limit = exactdist::Limits::default().stirling;
    let use_stirling = match route {
        RouteArg::Auto => params.n() <= limit,
        RouteArg::Stirling => true,
        RouteArg::PoissonBinomial => false,
    };
    if use_stirling {
        let table = StirlingTable::build(params.n())?;
        Ok(exactdist::pmf_stirling(params, &table)?)
    } else {
        Ok(exactdist::pmf_poisson_binomial(params))
    }
}

fn cmd_dist(a: &DistArgs, config: &Config, reproducible: bool) -> CliResult<String> {
    let params = parse_point(&a.point)?;
    let format = match a.format {
        Some(f) => f,
        None => match config.values.get("format").map(String::as_str) {
            Some("json") => Format::Json,
            Some("csv") | None => Format::Csv,
            Some(other) => return Err(CliError::Usage(format!("unknown format {other:?}"))),
        },
    };
    let dist = distribution(&params, a.route)?;
    let pmf = dist.pmf();
    let cdf = exactdist::cdf_best(&dist);
    let exact = dist.exact_pmf();
    let exact_cdf = dist.exact_cdf();

    match format {
        Format::Csv => {
            let mut s = String::from("x,pmf,cdf,log_pmf");
            if exact.is_some() {
                s.push_str(",pmf_exact,cdf_exact");
            }
            s.push('\n');
            for x in 0..params.n() {
                let _ = write!(
                    s,
                    "{},{},{},{}",
                    x + 1,
                    fmt_f64(pmf[x]),
                    fmt_f64(cdf[x]),
                    fmt_f64(dist.log_pmf()[x])
                );
                if let (Some(e), Some(c)) = (exact, exact_cdf.as_ref()) {
                    let _ = write!(s, ",{},{}", e[x], c[x]);
                }
                s.push('\n');
            }
            Ok(s)
        }
        Format::Json => {
            let rows: Vec<Value> = (0..params.n())
                .map(|x| {
                    let mut row = json!({
                        "x": x + 1,
                        "pmf": pmf[x],
                        "cdf": cdf[x],
                        "log_pmf": dist.log_pmf()[x],
                    });
                    if let (Some(e), Some(c)) = (exact, exact_cdf.as_ref()) {
                        row["pmf_exact"] = json!(e[x].to_string());
                        row["cdf_exact"] = json!(c[x].to_string());
                    }
                    row
                })
                .collect();
            let results = json!({
                "route": format!("{:?}", dist.route()),
                "full_support": dist.is_full_support(),
                "rows": rows,
            });
            let echo =
                json!({"n": params.n(), "theta": a.point.theta, "route": format!("{:?}", a.route)});
            Ok(envelope("dist", echo, results, reproducible))
        }
    }
}

fn cmd_moments(a: &PointArgs, reproducible: bool) -> CliResult<String> {
    let params = parse_point(a)?;
    let m = moments::exact_moments(&params);
    let env = moments::moment_envelopes(&params);
    let envelopes: BTreeMap<&str, _> = SumId::ALL.iter().map(|id| (id.as_str(), env[id])).collect();
    let mut power_sums = BTreeMap::new();
    for k in 0..=3 {
        let e = moments::power_sum_envelope(&params, k)?;
        power_sums.insert(format!("s{}", k + 1), e);
    }
    let results = json!({
        "moments": m,
        "envelopes": envelopes,
        "power_sum_envelopes": power_sums,
    });
    let echo = json!({"n": params.n(), "theta": a.theta});
    Ok(envelope("moments", echo, results, reproducible))
}

fn or_reason<T: serde::Serialize>(r: crate::Result<T>) -> (Value, Value) {
    match r {
        Ok(v) => (json!(v), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    }
}

fn cmd_bounds(a: &BoundsArgs, config: &Config, reproducible: bool) -> CliResult<String> {
    let params = parse_point(&a.point)?;
    let d: f64 = config.pick(a.d, "D", 1.0)?;
    let c: f64 = config.pick(a.c, "C", BERRY_ESSEEN_C)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(CliError::Usage(format!("--D must be positive, got {d}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(CliError::Usage(format!("--C must be positive, got {c}")));
    }
    let m = moments::exact_moments(&params);
    let report = bounds::bound_report_from(&params, &m, c);

    let dist = distribution(&params, RouteArg::Auto)?;
    let distance = |kind| {
        Standardization::from_summary(kind, &params, &m)
            .and_then(|s| gaussian::kolmogorov_distance(&dist, &s))
            .map(|r| r.distance)
    };
    let (kolmo_x, kolmo_x_reason) = or_reason(distance(StandardizationKind::ExactMoments));
    let (kolmo_y, kolmo_y_reason) = or_reason(distance(StandardizationKind::ApproxMoments));
    let (kolmo_z, kolmo_z_reason) = or_reason(distance(StandardizationKind::LogLeading));
    let (upper, upper_reason) = or_reason(bounds::upper_bound_with(&params, c));
    let (lyapunov, lyapunov_reason) = or_reason(bounds::lyapunov_fraction(&params));
    let (delta, delta_reason) = or_reason(bounds::hall_barbour_delta(&params));
    let lower = bounds::lower_bound(&params, d)?;
    let lower_reason = match lower.branch {
        bounds::Branch::None => json!("neither skew branch applies (needs variance-positive, variance-at-least-one, and one skew condition)"),
        _ => Value::Null,
    };

    let results = json!({
        "C": c,
        "D": d,
        "D_note": "illustrative: the Hall–Barbour constant has no published value",
        "gamma1": report.gamma1,
        "gamma2": report.gamma2,
        "gamma3": report.gamma3,
        "gamma4": report.gamma4,
        "conditions": report.conditions,
        "upper": upper,
        "upper_reason": upper_reason,
        "lower_i": report.lower_i(d),
        "lower_ii": report.lower_ii(d),
        "lower_branch": lower.branch,
        "lower_vacuous": lower.vacuous,
        "lower_reason": lower_reason,
        "lyapunov_fraction": lyapunov,
        "lyapunov_fraction_reason": lyapunov_reason,
        "hall_barbour": delta,
        "hall_barbour_reason": delta_reason,
        "kolmo_x": kolmo_x,
        "kolmo_x_reason": kolmo_x_reason,
        "kolmo_y": kolmo_y,
        "kolmo_y_reason": kolmo_y_reason,
        "kolmo_z": kolmo_z,
        "kolmo_z_reason": kolmo_z_reason,
        "moments": m,
    });
    let echo = json!({"n": params.n(), "theta": a.point.theta, "D": d, "C": c});
    Ok(envelope("bounds", echo, results, reproducible))
}

fn cmd_cstar(a: &CstarArgs, config: &Config) -> CliResult<String> {
    let tol: f64 = config.pick(a.tolerance, "tolerance", 1e-12)?;
    if !(tol >= 1e-14 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tolerance must be at least 1e-14, got {tol}"
        )));
    }
    let root = regimes::solve_cstar(tol)?;
    let residual = regimes::cstar_equation(root).abs();
    Ok(format!("cstar {root:.10}\nresidual {residual:e}\n"))
}

fn sweep_spec(a: &SweepArgs) -> CliResult<RegimeSpec> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| {
            CliError::Usage(format!("--coupling {:?} needs --{flag}", a.coupling).to_lowercase())
        })
    };
    let coupling = match a.coupling {
        CouplingArg::Power => Coupling::Power {
            a: a.a,
            p: need(a.p, "p")?,
        },
        CouplingArg::Ratio => Coupling::Ratio { c: need(a.c, "c")? },
        CouplingArg::Fixed => Coupling::Fixed {
            theta0: need(a.theta0, "theta0")?,
        },
    };
    Ok(RegimeSpec::new(coupling)?)
}

fn sweep_grid(a: &SweepArgs, config: &Config) -> CliResult<Vec<usize>> {
    let listed = a
        .n_values
        .clone()
        .or_else(|| config.values.get("n_values").cloned());
    if let Some(list) = listed {
        let grid = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad grid value {s:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if grid.is_empty() {
            return Err(CliError::Usage("n grid is empty".into()));
        }
        return Ok(grid);
    }
    let n_min = config.pick(a.n_min, "n_min", 1 << 10)?;
    let n_max = config.pick(a.n_max, "n_max", 1 << 20)?;
    let points = config.pick(a.points, "points", 11)?;
    regimes::geometric_grid(n_min, n_max, points).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.theta),
            fmt_f64((r.n as f64).ln()),
            fmt_f64(r.kolmo_x),
            fmt_f64(r.kolmo_y),
            fmt_opt(r.kolmo_z),
            fmt_opt(r.upper),
            fmt_opt(r.lower_i),
            fmt_opt(r.lower_ii),
            fmt_f64(r.rate_normalizer),
            fmt_f64(r.scaled_error),
            fmt_f64(r.scaled_error.ln()),
            r.status.replace(',', ";"),
        );
    }
    s
}

fn cmd_sweep(a: &SweepArgs, config: &Config) -> CliResult<String> {
    let d: f64 = config.pick(a.d, "D", 1.0)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(CliError::Usage(format!("--D must be positive, got {d}")));
    }
    let c: f64 = config.pick(a.big_c, "C", BERRY_ESSEEN_C)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(CliError::Usage(format!("--C must be positive, got {c}")));
    }
    let jobs: usize = config.pick(a.jobs, "jobs", 0)?;
    let grid = sweep_grid(a, config)?;
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(CliError::Usage(
            "n grid must be positive and strictly ascending".into(),
        ));
    }
    let spec = sweep_spec(a)?;
    let opts = SweepOptions {
        d,
        c,
        jobs,
        ..SweepOptions::default()
    };
    let rows = regimes::sweep(&spec, &grid, &opts)?;
    Ok(sweep_csv(&rows))
}
