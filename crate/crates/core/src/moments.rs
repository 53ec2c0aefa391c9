//! Moment sums of the Bernoulli summands `ξ_i ~ Bernoulli(θ/(θ+i−1))` and
//! their closed-form two-sided envelopes.
//!
//! Every sum is a linear combination of the power sums
//! `s_k = Σ_{i=1}^n (θ+i−1)^{−k}`:
//!
//! ```text
//! Σ E|ξ−p|²      = θ s1 − θ² s2
//! Σ E|ξ−p|³      = θ s1 − 3θ² s2 + 4θ³ s3 − 2θ⁴ s4
//! Σ E(ξ−p)³      = θ s1 − 3θ² s2 + 2θ³ s3
//! Σ (E|ξ−p|²)²   = θ² s2 − 2θ³ s3 + θ⁴ s4
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::EwensParams;
use crate::summation::{self, KahanSum};

/// `s_k = Σ_{i=1}^n (θ+i−1)^{−k}` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSums {
    params: EwensParams,
    s: Vec<f64>,
}

impl PowerSums {
    /// `s_k`, 1-based.
    pub fn get(&self, k: usize) -> f64 {
        self.s[k - 1]
    }

    pub fn k_max(&self) -> usize {
        self.s.len()
    }

    pub fn params(&self) -> &EwensParams {
        &self.params
    }
}

fn power_sum(params: &EwensParams, k: i32) -> f64 {
    let t = params.theta();
    summation::sum((0..params.n()).map(|i| (t + i as f64).recip().powi(k)))
}

pub fn power_sums(params: &EwensParams, k_max: usize) -> Result<PowerSums> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let s = (1..=k_max as i32).map(|k| power_sum(params, k)).collect();
    Ok(PowerSums {
        params: params.clone(),
        s,
    })
}

/// Exact first two moments of `K`, the third- and fourth-order moment sums
/// of the summands, and the approximate moments `μ_T`, `σ_T²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mu0: f64,
    pub sigma0_sq: f64,
    /// `Σ E|ξ_i − p_i|³`
    pub s3_abs: f64,
    /// `Σ E(ξ_i − p_i)³`
    pub s3_signed: f64,
    /// `Σ (E|ξ_i − p_i|²)²`
    pub s22: f64,
    pub mu_t: f64,
    pub sigma_t_sq: f64,
}

impl MomentSummary {
    pub fn sigma0(&self) -> f64 {
        self.sigma0_sq.sqrt()
    }

    pub fn sigma_t(&self) -> f64 {
        self.sigma_t_sq.sqrt()
    }
}

pub fn exact_moments(params: &EwensParams) -> MomentSummary {
    // Termwise in p_i and q_i = 1 − p_i: no cancellation, and every
    // nonnegative sum stays nonnegative.
    let t = params.theta();
    let (mut mu, mut var, mut abs3, mut signed3, mut sq22) = (
        KahanSum::new(),
        KahanSum::new(),
        KahanSum::new(),
        KahanSum::new(),
        KahanSum::new(),
    );
    for i in 1..=params.n() {
        let (p, q) = (params.p(i), params.q(i));
        let pq = p * q;
        mu.add(p);
        var.add(pq);
        abs3.add(pq * (p * p + q * q));
        signed3.add(pq * (q - p));
        sq22.add(pq * pq);
    }
    let x = params.n() as f64 / t;
    MomentSummary {
        mu0: mu.value(),
        sigma0_sq: var.value(),
        s3_abs: abs3.value(),
        s3_signed: signed3.value(),
        s22: sq22.value(),
        mu_t: t * x.ln_1p(),
        sigma_t_sq: t * (x.ln_1p() + 1.0 / (1.0 + x) - 1.0),
    }
}

fn binomial(m: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(m - j) / f64::from(j + 1))
}

/// `Σ_i E[(ξ_i − p_i)^m]` by the binomial expansion
/// `Σ_{j=1}^{m−1} (−1)^{j−1} C(m, j−1) Σ p_i^j + (−1)^{m−1}(m−1) Σ p_i^m`.
pub fn central_moment_sum(params: &EwensParams, m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "central moment order must be ≥ 2, got {m}"
        )));
    }
    let p_pow_sum = |j: i32| summation::sum((1..=params.n()).map(|i| params.p(i).powi(j)));
    let sign = |e: u32| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut terms: Vec<f64> = (1..m)
        .map(|j| sign(j - 1) * binomial(m, j - 1) * p_pow_sum(j as i32))
        .collect();
    terms.push(sign(m - 1) * f64::from(m - 1) * p_pow_sum(m as i32));
    Ok(summation::sum(terms))
}

/// A closed-form lower/upper pair around an exactly computed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopePair {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

impl EnvelopePair {
    pub fn holds(&self, slack: f64) -> bool {
        self.lower <= self.value + slack && self.value <= self.upper + slack
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Integral-comparison envelope for a power sum.
///
/// `k = 0`: brackets `s_1` by `log(1+n/θ) + n/(2θ(n+θ))` and
/// `log(1+n/θ) + n/(θ(n+θ))`.
/// `k ≥ 1`: brackets `s_{k+1}` by `1/(kθ^k) − 1/(k(n+θ)^k)` and that plus
/// `1/θ^{k+1}`.
pub fn power_sum_envelope(params: &EwensParams, k: i32) -> Result<EnvelopePair> {
    if k < 0 {
        return Err(Error::Domain(format!(
            "envelope order must be ≥ 0, got {k}"
        )));
    }
    let n = params.n() as f64;
    let t = params.theta();
    if k == 0 {
        let base = (n / t).ln_1p();
        return Ok(EnvelopePair {
            lower: base + n / (2.0 * t * (n + t)),
            upper: base + n / (t * (n + t)),
            value: power_sum(params, 1),
        });
    }
    let kf = f64::from(k);
    let integral = 1.0 / (kf * t.powi(k)) - 1.0 / (kf * (n + t).powi(k));
    Ok(EnvelopePair {
        lower: integral,
        upper: t.powi(k + 1).recip() + integral,
        value: power_sum(params, k + 1),
    })
}

/// Identifies one of the four moment sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumId {
    /// `Σ E|ξ−p|²`
    Var,
    /// `Σ E|ξ−p|³`
    Abs3,
    /// `Σ E(ξ−p)³`
    Signed3,
    /// `Σ (E|ξ−p|²)²`
    Sq22,
}

impl SumId {
    pub const ALL: [SumId; 4] = [SumId::Var, SumId::Abs3, SumId::Signed3, SumId::Sq22];

    pub fn as_str(self) -> &'static str {
        match self {
            SumId::Var => "var",
            SumId::Abs3 => "abs3",
            SumId::Signed3 => "signed3",
            SumId::Sq22 => "sq22",
        }
    }

    pub fn value(self, m: &MomentSummary) -> f64 {
        match self {
            SumId::Var => m.sigma0_sq,
            SumId::Abs3 => m.s3_abs,
            SumId::Signed3 => m.s3_signed,
            SumId::Sq22 => m.s22,
        }
    }
}

impl fmt::Display for SumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// Closed-form building blocks shared with the bounds module. Each is
// θ·{…} exactly as displayed, with r = θ/(n+θ).

fn ratio(params: &EwensParams) -> (f64, f64, f64) {
    let n = params.n() as f64;
    let t = params.theta();
    (n, t, t / (n + t))
}

/// `θ(log(1+n/θ) − 1 + θ/(n+θ))`
pub fn var_core(params: &EwensParams) -> f64 {
    let (n, t, r) = ratio(params);
    t * ((n / t).ln_1p() - 1.0 + r)
}

/// `θ{log(1+n/θ) − 5/3 + 3θ/(n+θ) − 2θ²/(n+θ)² + 2θ³/(3(n+θ)³)}`
pub fn abs3_core(params: &EwensParams) -> f64 {
    let (n, t, r) = ratio(params);
    t * ((n / t).ln_1p() - 5.0 / 3.0 + 3.0 * r - 2.0 * r * r + 2.0 * r * r * r / 3.0)
}

/// `θ{log(1+n/θ) − 2 + 3θ/(n+θ) − θ²/(n+θ)²}`
pub fn signed3_core(params: &EwensParams) -> f64 {
    let (n, t, r) = ratio(params);
    t * ((n / t).ln_1p() - 2.0 + 3.0 * r - r * r)
}

/// `θ{1/3 − θ/(n+θ) + θ²/(n+θ)² − θ³/(3(n+θ)³)}`
pub fn sq22_core(params: &EwensParams) -> f64 {
    let (_, t, r) = ratio(params);
    t * (1.0 / 3.0 - r + r * r - r * r * r / 3.0)
}

/// `n/(n+θ)`
pub(crate) fn n_share(params: &EwensParams) -> f64 {
    let (n, t, _) = ratio(params);
    n / (n + t)
}

/// Lower envelope of `Σ E|ξ−p|²`; its positivity is the Berry–Esseen
/// applicability condition.
pub fn var_lower(params: &EwensParams) -> f64 {
    var_core(params) + n_share(params) / 2.0 - 1.0
}

pub fn var_upper(params: &EwensParams) -> f64 {
    var_core(params) + n_share(params)
}

pub fn abs3_lower(params: &EwensParams) -> f64 {
    abs3_core(params) + n_share(params) / 2.0 - 5.0
}

pub fn abs3_upper(params: &EwensParams) -> f64 {
    abs3_core(params) + 4.0 + n_share(params)
}

pub fn signed3_lower(params: &EwensParams) -> f64 {
    signed3_core(params) - 3.0 + n_share(params) / 2.0
}

pub fn signed3_upper(params: &EwensParams) -> f64 {
    signed3_core(params) + 2.0 + n_share(params)
}

pub fn sq22_upper(params: &EwensParams) -> f64 {
    sq22_core(params) + 2.0
}

/// Two-sided envelopes for the variance, absolute and signed third moment
/// sums; upper-only (lower = 0) for `Σ (E|ξ−p|²)²`.
pub fn moment_envelopes(params: &EwensParams) -> BTreeMap<SumId, EnvelopePair> {
    let m = exact_moments(params);
    let pair = |lower, upper, id: SumId| EnvelopePair {
        lower,
        upper,
        value: id.value(&m),
    };
    BTreeMap::from([
        (
            SumId::Var,
            pair(var_lower(params), var_upper(params), SumId::Var),
        ),
        (
            SumId::Abs3,
            pair(abs3_lower(params), abs3_upper(params), SumId::Abs3),
        ),
        (
            SumId::Signed3,
            pair(signed3_lower(params), signed3_upper(params), SumId::Signed3),
        ),
        (SumId::Sq22, pair(0.0, sq22_upper(params), SumId::Sq22)),
    ])
}

/// Leading-order behaviour whenever `n²/θ → ∞`: `var_core` for the variance
/// sum and `abs3_core` for the absolute third moment sum.
pub fn leading_terms(params: &EwensParams) -> BTreeMap<SumId, f64> {
    BTreeMap::from([
        (SumId::Var, var_core(params)),
        (SumId::Abs3, abs3_core(params)),
    ])
}

/// Asymptotic case for [`asymptotic_equivalents`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticCase {
    /// `n/θ → ∞`
    A,
    /// `n/θ → c`
    B { c: f64 },
    /// `n/θ → 0`
    C,
}

impl AsymptoticCase {
    /// `label` is `A`, `B` or `C`; case B needs `c`.
    pub fn parse(label: &str, c: Option<f64>) -> Result<Self> {
        match (label.trim(), c) {
            ("A" | "a", _) => Ok(Self::A),
            ("C" | "c", _) => Ok(Self::C),
            ("B" | "b", Some(c)) if c.is_finite() && c > 0.0 => Ok(Self::B { c }),
            ("B" | "b", _) => Err(Error::Domain("case B needs a positive finite c".into())),
            (other, _) => Err(Error::Domain(format!("unknown case label {other:?}"))),
        }
    }
}

impl FromStr for AsymptoticCase {
    type Err = Error;

    /// `A`, `C`, or `B:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((label, c)) => {
                let c = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad case constant in {s:?}")))?;
                Self::parse(label, Some(c))
            }
            None => Self::parse(s, None),
        }
    }
}

/// Leading-order expressions for the four sums under the given case.
pub fn asymptotic_equivalents(params: &EwensParams, case: AsymptoticCase) -> BTreeMap<SumId, f64> {
    let n = params.n() as f64;
    let t = params.theta();
    match case {
        AsymptoticCase::A => {
            let v = t * (n / t).ln();
            BTreeMap::from([
                (SumId::Var, v),
                (SumId::Abs3, v),
                (SumId::Signed3, v),
                (SumId::Sq22, t / 3.0),
            ])
        }
        AsymptoticCase::B { c } => {
            let l = c.ln_1p();
            let u = 1.0 / (c + 1.0);
            BTreeMap::from([
                (SumId::Var, t * (l - 1.0 + u)),
                (
                    SumId::Abs3,
                    t * (l - 5.0 / 3.0 + 3.0 * u - 2.0 * u * u + 2.0 * u * u * u / 3.0),
                ),
                (SumId::Signed3, t * (l - 2.0 + 3.0 * u - u * u)),
                (SumId::Sq22, t * (1.0 / 3.0 - u + u * u - u * u * u / 3.0)),
            ])
        }
        AsymptoticCase::C => {
            let h = n * n / (2.0 * t);
            BTreeMap::from([
                (SumId::Var, h),
                (SumId::Abs3, h),
                (SumId::Signed3, -h),
                (SumId::Sq22, n * n * n / (3.0 * t * t) + 2.0),
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, t: f64) -> EwensParams {
        EwensParams::new(n, t).unwrap()
    }

    /// Termwise sums of the per-summand moments; independent of the
    /// power-sum identities.
    fn termwise(p: &EwensParams) -> [f64; 4] {
        let mut out = [0.0; 4];
        for i in 1..=p.n() {
            let (pi, qi) = (p.p(i), p.q(i));
            let var = pi * qi;
            out[0] += var;
            out[1] += pi * qi * (qi * qi + pi * pi);
            out[2] += pi * qi * (qi - pi);
            out[3] += var * var;
        }
        out
    }

    fn termwise_central(p: &EwensParams, m: i32) -> f64 {
        (1..=p.n())
            .map(|i| {
                let (pi, qi) = (p.p(i), p.q(i));
                pi * qi.powi(m) + qi * (-pi).powi(m)
            })
            .sum()
    }

    #[test]
    fn power_sum_examples() {
        let s = power_sums(&params(3, 1.0), 4).unwrap();
        assert!((s.get(1) - 11.0 / 6.0).abs() < 1e-15);
        for t in [0.3, 2.0, 17.0] {
            let s = power_sums(&params(1, t), 4).unwrap();
            for k in 1..=4 {
                assert!((s.get(k) - t.powi(-(k as i32))).abs() <= 1e-15 * s.get(k));
            }
        }
        let s = power_sums(&params(2, 1.0), 2).unwrap();
        assert_eq!(s.get(2), 1.25);
        assert!(power_sums(&params(2, 1.0), 0).is_err());
    }

    #[test]
    fn moment_examples() {
        let m = exact_moments(&params(3, 1.0));
        assert!((m.mu0 - 11.0 / 6.0).abs() < 1e-15);
        assert!((m.sigma0_sq - 17.0 / 36.0).abs() < 1e-15);

        let m = exact_moments(&params(1, 4.2));
        for v in [m.sigma0_sq, m.s3_abs, m.s3_signed, m.s22] {
            assert!(v.abs() < 1e-15, "{m:?}");
        }

        let m = exact_moments(&params(2, 1.0));
        assert!(m.s3_signed.abs() < 1e-15);

        let m = exact_moments(&params(50, 2.0));
        let x: f64 = 25.0;
        assert!((m.mu_t - 2.0 * x.ln_1p()).abs() < 1e-13);
        assert!((m.sigma_t_sq - 2.0 * (x.ln_1p() + 2.0 / 52.0 - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn identities_match_termwise_sums() {
        for n in [1, 2, 7, 50, 200] {
            for t in [0.1, 0.5, 1.0, 2.0, 5.0, 25.0, 200.0, 1e4] {
                let p = params(n, t);
                let s = power_sums(&p, 4).unwrap();
                let (s1, s2, s3, s4) = (
                    t * s.get(1),
                    t.powi(2) * s.get(2),
                    t.powi(3) * s.get(3),
                    t.powi(4) * s.get(4),
                );
                let got = [
                    s1 - s2,
                    s1 - 3.0 * s2 + 4.0 * s3 - 2.0 * s4,
                    s1 - 3.0 * s2 + 2.0 * s3,
                    s2 - 2.0 * s3 + s4,
                ];
                let m = exact_moments(&p);
                let tw = termwise(&p);
                assert!(m.sigma0_sq >= 0.0 && m.s3_abs >= 0.0 && m.s22 >= 0.0);
                for (a, b) in [m.sigma0_sq, m.s3_abs, m.s3_signed, m.s22].iter().zip(tw) {
                    assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
                }
                for (a, b) in got.iter().zip(tw) {
                    assert!((a - b).abs() <= 1e-12, "n={n} θ={t}: {got:?} vs {tw:?}");
                }
            }
        }
    }

    #[test]
    fn moment_inequalities() {
        for n in [2, 9, 120] {
            for t in [0.1, 1.0, 30.0, 1e4] {
                let m = exact_moments(&params(n, t));
                assert!(m.sigma0_sq > 0.0);
                assert!(m.s3_abs + 1e-15 >= m.s3_signed.abs());
                assert!(m.s3_abs <= m.sigma0_sq + 1e-15);
                assert!(m.s22 <= m.sigma0_sq + 1e-15);
            }
        }
    }

    #[test]
    fn central_moment_examples() {
        let v = central_moment_sum(&params(3, 1.0), 2).unwrap();
        assert!((v - 17.0 / 36.0).abs() < 1e-15);
        assert!(central_moment_sum(&params(2, 1.0), 3).unwrap().abs() < 1e-15);
        let v = central_moment_sum(&params(2, 1.0), 4).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        assert!(central_moment_sum(&params(2, 1.0), 1).is_err());
        assert!(central_moment_sum(&params(2, 1.0), 0).is_err());
    }

    #[test]
    fn central_moment_matches_summary_and_termwise() {
        for n in [1, 5, 40] {
            for t in [0.5, 1.0, 3.0] {
                let p = params(n, t);
                let m = exact_moments(&p);
                assert!((central_moment_sum(&p, 2).unwrap() - m.sigma0_sq).abs() < 1e-12);
                assert!((central_moment_sum(&p, 3).unwrap() - m.s3_signed).abs() < 1e-12);
                for k in 2..=6 {
                    let a = central_moment_sum(&p, k).unwrap();
                    assert!((a - termwise_central(&p, k as i32)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn power_sum_envelope_examples() {
        let e = power_sum_envelope(&params(1, 1.0), 0).unwrap();
        assert!((e.lower - (2f64.ln() + 0.25)).abs() < 1e-15);
        assert!((e.upper - (2f64.ln() + 0.5)).abs() < 1e-15);
        assert_eq!(e.value, 1.0);
        assert!((e.lower - 0.9431).abs() < 1e-4 && (e.upper - 1.1931).abs() < 1e-4);

        let e = power_sum_envelope(&params(1, 1.0), 1).unwrap();
        assert_eq!((e.lower, e.value, e.upper), (0.5, 1.0, 1.5));

        for n in [10, 1000, 100_000] {
            let e = power_sum_envelope(&params(n, 1.0), 0).unwrap();
            assert!(e.width() <= 0.5 && e.holds(0.0));
        }
        assert!(power_sum_envelope(&params(1, 1.0), -1).is_err());
    }

    #[test]
    fn moment_envelope_examples() {
        let env = moment_envelopes(&params(100, 1.0));
        let m = exact_moments(&params(100, 1.0));
        assert_eq!(env[&SumId::Var].value, m.sigma0_sq);
        assert!(env[&SumId::Var].holds(0.0));

        let env = moment_envelopes(&params(1, 1.0));
        let var = env[&SumId::Var];
        let expected = 2f64.ln() - 1.0 + 0.5 + 0.25 - 1.0;
        assert!((var.lower - expected).abs() < 1e-15);
        assert!(var.lower < 0.0 && var.value == 0.0);

        for (n, t) in [(3, 0.2), (300, 9.0)] {
            let sq = moment_envelopes(&params(n, t))[&SumId::Sq22];
            assert_eq!(sq.lower, 0.0);
            assert!(sq.value >= 0.0 && sq.value <= sq.upper);
        }
    }

    #[test]
    fn asymptotic_examples() {
        let eq = asymptotic_equivalents(&params(1_000_000, 10.0), AsymptoticCase::A);
        assert!((eq[&SumId::Var] - 10.0 * 1e5f64.ln()).abs() < 1e-12);

        let eq = asymptotic_equivalents(&params(100, 1e6), AsymptoticCase::C);
        assert!((eq[&SumId::Signed3] + 0.005).abs() < 1e-15);

        let eq = asymptotic_equivalents(&params(1000, 1000.0), AsymptoticCase::B { c: 1.0 });
        assert!((eq[&SumId::Var] - 1000.0 * (2f64.ln() - 0.5)).abs() < 1e-12);

        assert_eq!(
            "B:2.5".parse::<AsymptoticCase>().unwrap(),
            AsymptoticCase::B { c: 2.5 }
        );
        assert_eq!("A".parse::<AsymptoticCase>().unwrap(), AsymptoticCase::A);
        assert!("D".parse::<AsymptoticCase>().is_err());
        assert!("B".parse::<AsymptoticCase>().is_err());
        assert!(AsymptoticCase::parse("B", Some(-1.0)).is_err());
    }

    #[test]
    fn ratio_to_leading_term_converges_along_sqrt_coupling() {
        for id in [SumId::Var, SumId::Abs3] {
            let mut prev_gap = f64::INFINITY;
            for e in 10..=20 {
                let n = 1usize << e;
                let p = params(n, (n as f64).sqrt());
                let value = id.value(&exact_moments(&p));
                let gap = (value / leading_terms(&p)[&id] - 1.0).abs();
                assert!(gap < prev_gap, "{id} at n = 2^{e}: {gap} !< {prev_gap}");
                prev_gap = gap;
            }
            assert!(prev_gap < 0.05);
        }
    }

    #[test]
    fn variance_at_least_one_on_grid() {
        for n in [8, 20, 64, 200] {
            for t in [1.0, 2.0, 5.0, 8.0, 25.0, 200.0] {
                if t <= n as f64 {
                    assert!(exact_moments(&params(n, t)).sigma0_sq >= 1.0, "n={n} θ={t}");
                }
            }
        }
        // Small θ keeps the variance below one even when θ ≤ n.
        assert!(exact_moments(&params(8, 0.5)).sigma0_sq < 1.0);
        assert!(exact_moments(&params(200, 0.1)).sigma0_sq < 1.0);
    }

    proptest! {
        #[test]
        fn envelopes_hold(n in 1usize..400, log_t in -2.5f64..4.5) {
            let p = params(n, 10f64.powf(log_t));
            for k in 0..=3 {
                let e = power_sum_envelope(&p, k).unwrap();
                prop_assert!(e.holds(1e-9 * e.value.max(1.0)), "A1 k={} {:?}", k, e);
            }
            for (id, e) in moment_envelopes(&p) {
                prop_assert!(e.holds(1e-9), "{} {:?}", id, e);
            }
        }

        #[test]
        fn power_sums_shrink(n in 1usize..300, t in 0.05f64..500.0) {
            let s = power_sums(&params(n, t), 4).unwrap();
            for k in 1..4 {
                prop_assert!(s.get(k) > 0.0);
                prop_assert!(s.get(k + 1) <= s.get(k) / t * (1.0 + 1e-14));
            }
        }
    }
}
