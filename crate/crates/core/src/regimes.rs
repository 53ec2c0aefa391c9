//! Joint growth laws θ = θ(n), their asymptotic case, and sweeps that
//! tabulate the measured Kolmogorov distance against the bounds and the
//! case-specific decay rate.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BERRY_ESSEEN_C};
use crate::error::{Error, Result};
use crate::exactdist::{self, Limits, StirlingTable};
use crate::gaussian::{self, Standardization, StandardizationKind};
use crate::moments;
use crate::params::EwensParams;

/// `log(1+x) − 2 + 3/(x+1) − 1/(x+1)²`; its positive root is c*.
pub fn cstar_equation(x: f64) -> f64 {
    let u = 1.0 / (x + 1.0);
    x.ln_1p() - 2.0 + 3.0 * u - u * u
}

const CSTAR_BRACKET: (f64, f64) = (0.1, 100.0);

/// Positive root of [`cstar_equation`] by Brent's method on `[0.1, 100]`.
pub fn solve_cstar(tolerance: f64) -> Result<f64> {
    if !(tolerance >= 1e-14 && tolerance.is_finite()) {
        return Err(Error::Domain(format!(
            "tolerance must be at least 1e-14, got {tolerance}"
        )));
    }
    brent(cstar_equation, CSTAR_BRACKET.0, CSTAR_BRACKET.1, tolerance)
}

/// c* at full double precision, computed once.
pub fn cstar() -> f64 {
    static CSTAR: OnceLock<f64> = OnceLock::new();
    *CSTAR.get_or_init(|| solve_cstar(1e-14).expect("c* is bracketed"))
}

fn brent<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    const MAX_ITER: usize = 200;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa * fb > 0.0 {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// How θ grows with n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coupling {
    /// `θ = θ0`
    Fixed { theta0: f64 },
    /// `θ = a·n^p`
    Power { a: f64, p: f64 },
    /// `θ = n/c`
    Ratio { c: f64 },
}

impl Coupling {
    pub fn theta_at(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Coupling::Fixed { theta0 } => theta0,
            Coupling::Power { a, p } => a * n.powf(p),
            Coupling::Ratio { c } => n / c,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        match *self {
            Coupling::Fixed { theta0 } => positive("theta0", theta0),
            Coupling::Ratio { c } => positive("c", c),
            Coupling::Power { a, p } => {
                positive("a", a)?;
                if !(0.0..2.0).contains(&p) {
                    return Err(Error::Domain(format!(
                        "power exponent must satisfy 0 ≤ p < 2 so that θ is nondecreasing and n²/θ → ∞, got {p}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Asymptotic case of a coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `n/θ → ∞`
    A,
    /// `n/θ → c` with `c ≠ c*`
    #[serde(rename = "B*")]
    BStar,
    /// `n/θ → c*`; the decay rate is not determined.
    #[serde(rename = "B-at-cstar")]
    BCritical,
    /// `n/θ → 0` and `n²/θ → ∞`
    C1,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::A => "A",
            CaseLabel::BStar => "B*",
            CaseLabel::BCritical => "B-at-cstar",
            CaseLabel::C1 => "C1",
        })
    }
}

/// Ratios within this distance of c* are classified as critical.
pub const CSTAR_PROXIMITY: f64 = 1e-6;

pub fn classify_coupling(coupling: &Coupling, cstar: f64) -> Result<CaseLabel> {
    coupling.validate()?;
    let ratio_case = |c: f64| {
        if (c - cstar).abs() <= CSTAR_PROXIMITY {
            CaseLabel::BCritical
        } else {
            CaseLabel::BStar
        }
    };
    Ok(match *coupling {
        Coupling::Fixed { .. } => CaseLabel::A,
        Coupling::Power { p, .. } if p < 1.0 => CaseLabel::A,
        Coupling::Power { a, p: 1.0 } => ratio_case(1.0 / a),
        Coupling::Power { .. } => CaseLabel::C1,
        Coupling::Ratio { c } => ratio_case(c),
    })
}

/// A validated coupling with its case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeSpec {
    pub coupling: Coupling,
    pub declared_case: CaseLabel,
}

impl RegimeSpec {
    pub fn new(coupling: Coupling) -> Result<Self> {
        Ok(Self {
            coupling,
            declared_case: classify_coupling(&coupling, cstar())?,
        })
    }

    pub fn power(a: f64, p: f64) -> Result<Self> {
        Self::new(Coupling::Power { a, p })
    }

    pub fn ratio(c: f64) -> Result<Self> {
        Self::new(Coupling::Ratio { c })
    }

    pub fn fixed(theta0: f64) -> Result<Self> {
        Self::new(Coupling::Fixed { theta0 })
    }

    pub fn theta_at(&self, n: usize) -> f64 {
        self.coupling.theta_at(n)
    }
}

pub fn classify(spec: &RegimeSpec, cstar: f64) -> Result<CaseLabel> {
    classify_coupling(&spec.coupling, cstar)
}

/// The exact decay rate's reciprocal: `√(θ log(n/θ))`, `√θ`, or `√(n²/θ)`.
pub fn rate_normalizer(case: CaseLabel, n: usize, theta: f64) -> Result<f64> {
    let n = n as f64;
    match case {
        CaseLabel::A => {
            let l = (n / theta).ln();
            if !(l > 0.0) {
                return Err(Error::Domain(format!(
                    "log(n/θ) ≤ 0 at n = {n}, θ = {theta}"
                )));
            }
            Ok((theta * l).sqrt())
        }
        CaseLabel::BStar | CaseLabel::BCritical => Ok(theta.sqrt()),
        CaseLabel::C1 => Ok(n / theta.sqrt()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Hall–Barbour constant used to evaluate the lower bounds.
    pub d: f64,
    /// Berry–Esseen constant.
    pub c: f64,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub limits: Limits,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            d: 1.0,
            c: BERRY_ESSEEN_C,
            jobs: 0,
            limits: Limits::default(),
        }
    }
}

/// One grid point of a sweep. Failed rows carry NaN numerics and the error
/// text in `status`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub theta: f64,
    pub kolmo_x: f64,
    pub kolmo_y: f64,
    pub kolmo_z: Option<f64>,
    pub upper: Option<f64>,
    pub lower_i: Option<f64>,
    pub lower_ii: Option<f64>,
    pub rate_normalizer: f64,
    pub scaled_error: f64,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn failed(n: usize, theta: f64, err: Error) -> Self {
        Self {
            n,
            theta,
            kolmo_x: f64::NAN,
            kolmo_y: f64::NAN,
            kolmo_z: None,
            upper: None,
            lower_i: None,
            lower_ii: None,
            rate_normalizer: f64::NAN,
            scaled_error: f64::NAN,
            status: format!("error: {err}"),
        }
    }
}

/// Evaluates one `(n, θ)` point: exact law, three distances, and bounds.
pub fn sweep_row(
    spec: &RegimeSpec,
    n: usize,
    table: Option<&StirlingTable>,
    opts: &SweepOptions,
) -> SweepRow {
    let theta = spec.theta_at(n);
    row_inner(spec, n, theta, table, opts).unwrap_or_else(|e| SweepRow::failed(n, theta, e))
}

fn row_inner(
    spec: &RegimeSpec,
    n: usize,
    theta: f64,
    table: Option<&StirlingTable>,
    opts: &SweepOptions,
) -> Result<SweepRow> {
    let params = EwensParams::new(n, theta)?;
    let dist = match table {
        Some(t) if n <= t.n_max() => exactdist::pmf_stirling_with(&params, t, &opts.limits)?,
        _ => exactdist::pmf_poisson_binomial_with(&params, &opts.limits),
    };
    let m = moments::exact_moments(&params);
    let distance = |kind| -> Result<f64> {
        let std = Standardization::from_summary(kind, &params, &m)?;
        Ok(gaussian::kolmogorov_distance(&dist, &std)?.distance)
    };
    let kolmo_x = distance(StandardizationKind::ExactMoments)?;
    let kolmo_y = distance(StandardizationKind::ApproxMoments)?;
    let kolmo_z = distance(StandardizationKind::LogLeading).ok();
    let report = bounds::bound_report_from(&params, &m, opts.c);
    let rate = rate_normalizer(spec.declared_case, n, theta)?;
    Ok(SweepRow {
        n,
        theta,
        kolmo_x,
        kolmo_y,
        kolmo_z,
        upper: report.upper,
        lower_i: report.lower_i(opts.d),
        lower_ii: report.lower_ii(opts.d),
        rate_normalizer: rate,
        scaled_error: kolmo_x * rate,
        status: "ok".into(),
    })
}

/// Evaluates every grid point; rows come back in input order.
pub fn sweep(spec: &RegimeSpec, n_values: &[usize], opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() {
        return Err(Error::Domain("n grid is empty".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) || n_values[0] == 0 {
        return Err(Error::Domain(
            "n grid must be positive and strictly ascending".into(),
        ));
    }
    if !(opts.d > 0.0 && opts.d.is_finite()) {
        return Err(Error::Domain(format!(
            "D must be positive and finite, got {}",
            opts.d
        )));
    }
    let small_max = n_values
        .iter()
        .copied()
        .filter(|&n| n <= opts.limits.stirling)
        .max();
    let table = small_max
        .map(|n| StirlingTable::build_with_limit(n, opts.limits.stirling))
        .transpose()?;

    let run = || -> Vec<SweepRow> {
        n_values
            .par_iter()
            .map(|&n| sweep_row(spec, n, table.as_ref(), opts))
            .collect()
    };
    if opts.jobs == 0 {
        return Ok(run());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {} workers: {e}", opts.jobs)))?;
    Ok(pool.install(run))
}

/// `points` integers spaced geometrically from `n_min` to `n_max`, rounded
/// and deduplicated.
pub fn geometric_grid(n_min: usize, n_max: usize, points: usize) -> Result<Vec<usize>> {
    if n_min == 0 || n_max < n_min || points == 0 {
        return Err(Error::Domain(format!(
            "bad geometric grid: n_min = {n_min}, n_max = {n_max}, points = {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![n_min]);
    }
    let ratio = (n_max as f64 / n_min as f64).ln();
    let mut grid: Vec<usize> = (0..points)
        .map(|k| (n_min as f64 * (ratio * k as f64 / (points - 1) as f64).exp()).round() as usize)
        .collect();
    grid[points - 1] = n_max;
    grid.dedup();
    Ok(grid)
}

/// `max/min` of `scaled_error` over the last `top` successful rows.
pub fn rate_band(rows: &[SweepRow], top: usize) -> Option<f64> {
    let ok: Vec<f64> = rows
        .iter()
        .filter(|r| r.is_ok())
        .map(|r| r.scaled_error)
        .collect();
    if ok.len() < top || top == 0 {
        return None;
    }
    let tail = &ok[ok.len() - top..];
    let max = tail.iter().copied().fold(f64::MIN, f64::max);
    let min = tail.iter().copied().fold(f64::MAX, f64::min);
    Some(max / min)
}
