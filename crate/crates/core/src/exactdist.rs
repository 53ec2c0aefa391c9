//! Exact law of `K`.
//!
//! Two independent routes are provided, each serving as the other's check:
//!
//! * [`pmf_stirling`] evaluates `s̄(n,x) θ^x / (θ)_n` from a table of
//!   arbitrary-precision Stirling numbers of the first kind;
//! * [`pmf_poisson_binomial`] convolves the `n` independent
//!   `Bernoulli(θ/(θ+i−1))` summands by dynamic programming.
//!
//! Both produce a log-space pmf for any θ and, when θ is rational and `n`
//! is within [`Limits::rational`], an exact rational pmf as well.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::EwensParams;
use crate::summation::{self, KahanSum};

/// Probabilities below this are flushed out of the probability-domain
/// convolution and recovered, where affordable, by the log-domain pass.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Size limits for the exact and full-support paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest Stirling table that may be built.
    pub stirling: usize,
    /// Largest `n` for which exact rational pmfs are produced.
    pub rational: usize,
    /// Largest `n` for which the log-domain convolution recovers tail
    /// probabilities that underflow double precision.
    pub full_support: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            stirling: 500,
            rational: 200,
            full_support: 4096,
        }
    }
}

/// Which computation produced a [`LengthDistribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Stirling,
    PoissonBinomial,
}

/// Unsigned Stirling numbers of the first kind `s̄(m, x)`, `1 ≤ x ≤ m ≤ n_max`.
#[derive(Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
    ln_rows: Vec<OnceLock<Vec<f64>>>,
}

impl StirlingTable {
    /// Builds the table up to `n_max` under the default size limit.
    pub fn build(n_max: usize) -> Result<Self> {
        Self::build_with_limit(n_max, Limits::default().stirling)
    }

    pub fn build_with_limit(n_max: usize, limit: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParams("n_max must be at least 1".into()));
        }
        if n_max > limit {
            return Err(Error::ResourceLimit {
                what: "Stirling table size",
                requested: n_max,
                limit,
            });
        }
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max);
        rows.push(vec![BigUint::one()]);
        for m in 1..n_max {
            // s̄(m+1, x) = s̄(m, x−1) + m·s̄(m, x)
            let prev = &rows[m - 1];
            let mut next = Vec::with_capacity(m + 1);
            for x in 1..=m + 1 {
                let mut v = if x >= 2 {
                    prev[x - 2].clone()
                } else {
                    BigUint::zero()
                };
                if x <= m {
                    v += &prev[x - 1] * BigUint::from(m);
                }
                next.push(v);
            }
            rows.push(next);
        }
        let ln_rows = (0..n_max).map(|_| OnceLock::new()).collect();
        Ok(Self { rows, ln_rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Row `m`: `[s̄(m,1), …, s̄(m,m)]`.
    pub fn row(&self, m: usize) -> &[BigUint] {
        &self.rows[m - 1]
    }

    /// `s̄(m, x)`; zero outside `1 ≤ x ≤ m`.
    pub fn get(&self, m: usize, x: usize) -> BigUint {
        if x == 0 || x > m || m > self.n_max() {
            return BigUint::zero();
        }
        self.rows[m - 1][x - 1].clone()
    }

    /// Natural logs of row `m`, computed once and cached.
    pub fn ln_row(&self, m: usize) -> &[f64] {
        self.ln_rows[m - 1].get_or_init(|| self.rows[m - 1].iter().map(ln_biguint).collect())
    }
}

/// Natural log of a positive big integer.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map_or(f64::NEG_INFINITY, |u| (u as f64).ln());
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("top 64 bits fit");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// The law of `K` on its support `1..=n`.
#[derive(Debug, Clone)]
pub struct LengthDistribution {
    params: EwensParams,
    log_pmf: Vec<f64>,
    exact_pmf: Option<Vec<BigRational>>,
    route: Route,
}

impl LengthDistribution {
    pub fn params(&self) -> &EwensParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn route(&self) -> Route {
        self.route
    }

    /// `log P(K = x)` at index `x − 1`.
    pub fn log_pmf(&self) -> &[f64] {
        &self.log_pmf
    }

    pub fn exact_pmf(&self) -> Option<&[BigRational]> {
        self.exact_pmf.as_deref()
    }

    pub fn pmf(&self) -> Vec<f64> {
        self.log_pmf.iter().map(|l| l.exp()).collect()
    }

    /// True when every probability is represented as a finite log value.
    /// Only very large `n` (beyond [`Limits::full_support`]) can leave
    /// far-tail entries at `−∞`.
    pub fn is_full_support(&self) -> bool {
        self.log_pmf.iter().all(|l| l.is_finite())
    }

    /// Exact partial sums, when the exact pmf is present.
    pub fn exact_cdf(&self) -> Option<Vec<BigRational>> {
        let pmf = self.exact_pmf.as_ref()?;
        let mut acc = BigRational::zero();
        Some(
            pmf.iter()
                .map(|p| {
                    acc += p;
                    acc.clone()
                })
                .collect(),
        )
    }
}

/// Compensated left-to-right CDF, `F(x)` at index `x − 1`.
pub fn cdf(dist: &LengthDistribution) -> Vec<f64> {
    let mut c = summation::cumulative(&dist.pmf());
    c.iter_mut().for_each(|v| *v = v.min(1.0));
    c
}

/// CDF values for distance computations: exact partial sums rounded once
/// when available, the compensated float CDF otherwise.
pub fn cdf_best(dist: &LengthDistribution) -> Vec<f64> {
    match dist.exact_cdf() {
        Some(c) => c.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
        None => cdf(dist),
    }
}

fn log_rising_factorial(params: &EwensParams) -> f64 {
    let t = params.theta();
    summation::sum((0..params.n()).map(|i| (t + i as f64).ln()))
}

/// `(p, q)` with `θ = p/q`, both positive.
fn theta_parts(params: &EwensParams) -> Option<(BigUint, BigUint)> {
    let r = params.theta_param().exact()?;
    Some((r.numer().to_biguint()?, r.denom().to_biguint()?))
}

/// `Π_{i=1}^n (p + (i−1)q)`, i.e. `q^n (θ)_n`.
fn scaled_rising_factorial(n: usize, p: &BigUint, q: &BigUint) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, i| acc * (p + q * BigUint::from(i)))
}

fn to_rational(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.clone()))
}

/// pmf of `K` from the Stirling table, with default limits.
pub fn pmf_stirling(params: &EwensParams, table: &StirlingTable) -> Result<LengthDistribution> {
    pmf_stirling_with(params, table, &Limits::default())
}

pub fn pmf_stirling_with(
    params: &EwensParams,
    table: &StirlingTable,
    limits: &Limits,
) -> Result<LengthDistribution> {
    let n = params.n();
    if n > table.n_max() {
        return Err(Error::Dimension {
            n,
            n_max: table.n_max(),
        });
    }
    let ln_theta = params.theta().ln();
    let ln_rf = log_rising_factorial(params);
    let log_pmf = table
        .ln_row(n)
        .iter()
        .enumerate()
        .map(|(i, ls)| ls + (i + 1) as f64 * ln_theta - ln_rf)
        .collect();

    let exact_pmf = match theta_parts(params) {
        Some((p, q)) if n <= limits.rational => {
            let den = scaled_rising_factorial(n, &p, &q);
            // s̄(n,x) p^x q^(n−x) / Π(p + (i−1)q)
            let q_pows: Vec<BigUint> =
                std::iter::successors(Some(BigUint::one()), |a| Some(a * &q))
                    .take(n)
                    .collect();
            let mut p_pow = BigUint::one();
            let row = table.row(n);
            let mut out = Vec::with_capacity(n);
            for x in 1..=n {
                p_pow *= &p;
                let num = &row[x - 1] * &p_pow * &q_pows[n - x];
                out.push(to_rational(num, &den));
            }
            Some(out)
        }
        _ => None,
    };

    Ok(LengthDistribution {
        params: params.clone(),
        log_pmf,
        exact_pmf,
        route: Route::Stirling,
    })
}

/// pmf of `K` by Bernoulli convolution, with default limits.
pub fn pmf_poisson_binomial(params: &EwensParams) -> LengthDistribution {
    pmf_poisson_binomial_with(params, &Limits::default())
}

pub fn pmf_poisson_binomial_with(params: &EwensParams, limits: &Limits) -> LengthDistribution {
    let n = params.n();
    let (probs, flushed) = convolve_probabilities(params);

    let mut log_pmf: Vec<f64> = probs[1..=n].iter().map(|v| v.ln()).collect();
    if flushed && n <= limits.full_support {
        let logs = convolve_log(params);
        for (x, lp) in log_pmf.iter_mut().enumerate() {
            // Entries near the floor may have missed flushed inflow.
            if probs[x + 1] < 1e-280 {
                *lp = logs[x + 1];
            }
        }
    }

    let exact_pmf = match theta_parts(params) {
        Some((p, q)) if n <= limits.rational => Some(convolve_exact(n, &p, &q)),
        _ => None,
    };

    LengthDistribution {
        params: params.clone(),
        log_pmf,
        exact_pmf,
        route: Route::PoissonBinomial,
    }
}

/// Probability-domain convolution over the active window of entries above
/// [`UNDERFLOW_FLOOR`]. Returns `P(K = x)` at index `x` (index 0 unused) and
/// whether anything was flushed.
fn convolve_probabilities(params: &EwensParams) -> (Vec<f64>, bool) {
    let n = params.n();
    let mut cur = vec![0.0f64; n + 2];
    let mut next = vec![0.0f64; n + 2];
    // ξ_1 = 1 almost surely.
    cur[1] = 1.0;
    let (mut lo, mut hi) = (1usize, 1usize);
    let mut flushed = false;

    for i in 2..=n {
        let p = params.p(i);
        let q = params.q(i);
        next[lo] = q * cur[lo];
        next[hi + 1] = p * cur[hi];
        for ((dst, &stay), &step) in next[lo + 1..=hi]
            .iter_mut()
            .zip(&cur[lo + 1..=hi])
            .zip(&cur[lo..hi])
        {
            *dst = q * stay + p * step;
        }
        hi += 1;
        std::mem::swap(&mut cur, &mut next);

        while lo < hi && cur[lo] < UNDERFLOW_FLOOR {
            cur[lo] = 0.0;
            lo += 1;
            flushed = true;
        }
        while hi > lo && cur[hi] < UNDERFLOW_FLOOR {
            cur[hi] = 0.0;
            hi -= 1;
            flushed = true;
        }
    }
    (cur, flushed)
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-domain convolution over the full support, `O(n²)`.
fn convolve_log(params: &EwensParams) -> Vec<f64> {
    let n = params.n();
    let t = params.theta();
    let ln_t = t.ln();
    let mut v = vec![f64::NEG_INFINITY; n + 1];
    v[1] = 0.0;
    for i in 2..=n {
        let m = (i - 1) as f64;
        let ln_den = (t + m).ln();
        let ln_p = ln_t - ln_den;
        let ln_q = m.ln() - ln_den;
        v[i] = v[i - 1] + ln_p;
        for x in (2..i).rev() {
            v[x] = log_add_exp(v[x] + ln_q, v[x - 1] + ln_p);
        }
        v[1] += ln_q;
    }
    v
}

/// Exact convolution with θ = p/q: the coefficients of
/// `Π_{i=1}^n ((i−1)q + p·t)` divided by `Π_{i=1}^n (p + (i−1)q)`.
fn convolve_exact(n: usize, p: &BigUint, q: &BigUint) -> Vec<BigRational> {
    let mut coef = vec![BigUint::zero(); n + 1];
    coef[0] = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=n {
        let stay = q * BigUint::from(i - 1);
        for x in (1..=i).rev() {
            let moved = &coef[x - 1] * p;
            coef[x] = &coef[x] * &stay + moved;
        }
        coef[0] = &coef[0] * &stay;
        den *= p + &stay;
    }
    coef.into_iter()
        .skip(1)
        .map(|c| to_rational(c, &den))
        .collect()
}

/// Total probability of a float pmf, compensated.
pub fn total_mass(dist: &LengthDistribution) -> f64 {
    dist.log_pmf
        .iter()
        .map(|l| l.exp())
        .collect::<KahanSum>()
        .value()
}
