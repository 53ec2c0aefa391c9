//! Explicit upper and lower bounds on `‖F_{n,θ} − Φ‖_∞`, where `F_{n,θ}` is
//! the CDF of `(K − μ0)/σ0`.
//!
//! The upper bound is `C·γ1` (Berry–Esseen with Tyurin's constant
//! `C ≤ 0.5591`). The lower bounds `γ2/D − γ3` and `γ4/D − γ3` come from the
//! Hall–Barbour reverse inequality, whose universal constant `D` has no
//! published value and is therefore always a caller input.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{self, MomentSummary};
use crate::params::EwensParams;

/// Tyurin's Berry–Esseen constant.
pub const BERRY_ESSEEN_C: f64 = 0.5591;

/// Applicability conditions of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Lower variance envelope
    /// `θ(log(1+n/θ) − 1 + θ/(n+θ)) + n/(2(θ+n)) − 1 > 0`.
    VariancePositive,
    /// `θ{log(1+n/θ) − 2 + 3θ/(n+θ) − θ²/(n+θ)²} − 3 + n/(2(n+θ)) > 0`.
    PositiveSkew,
    /// `θ{log(1+n/θ) − 2 + 3θ/(n+θ) − θ²/(n+θ)²} + 2 + n/(n+θ) < 0`.
    NegativeSkew,
    /// `var(K) ≥ 1`.
    VarianceAtLeastOne,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::VariancePositive => "variance-positive",
            Condition::PositiveSkew => "positive-skew",
            Condition::NegativeSkew => "negative-skew",
            Condition::VarianceAtLeastOne => "variance-at-least-one",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub variance_positive: bool,
    pub positive_skew: bool,
    pub negative_skew: bool,
    pub var_ge_1: bool,
}

pub fn evaluate_conditions(params: &EwensParams, moments: &MomentSummary) -> Conditions {
    Conditions {
        variance_positive: moments::var_lower(params) > 0.0,
        positive_skew: moments::signed3_lower(params) > 0.0,
        negative_skew: moments::signed3_upper(params) < 0.0,
        var_ge_1: moments.sigma0_sq >= 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gammas {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
}

/// `γ2` and `γ4`, whose denominators use the upper variance envelope.
fn skew_gammas(params: &EwensParams) -> Result<(f64, f64)> {
    let den = moments::var_upper(params);
    if !(den > 0.0) {
        return Err(Error::ConditionViolated(Condition::VariancePositive));
    }
    let den = den.powf(1.5);
    let core = moments::signed3_core(params);
    let share = moments::n_share(params);
    let gamma2 = (core - 3.0 + share / 2.0) / den;
    let gamma4 = -(core + 2.0 + share) / den;
    Ok((gamma2, gamma4))
}

/// `γ1` and `γ3`, whose denominators use the lower variance envelope.
fn envelope_gammas(params: &EwensParams) -> Result<(f64, f64)> {
    let den = moments::var_lower(params);
    if !(den > 0.0) {
        return Err(Error::ConditionViolated(Condition::VariancePositive));
    }
    let gamma1 = moments::abs3_upper(params) / den.powf(1.5);
    let gamma3 = moments::sq22_upper(params) / (den * den);
    Ok((gamma1, gamma3))
}

/// All four γ values; fails unless the lower variance envelope is positive.
pub fn gamma_values(params: &EwensParams) -> Result<Gammas> {
    let (gamma1, gamma3) = envelope_gammas(params)?;
    let (gamma2, gamma4) = skew_gammas(params)?;
    Ok(Gammas {
        gamma1,
        gamma2,
        gamma3,
        gamma4,
    })
}

/// `C·γ1` with `C = 0.5591`.
pub fn upper_bound(params: &EwensParams) -> Result<f64> {
    upper_bound_with(params, BERRY_ESSEEN_C)
}

pub fn upper_bound_with(params: &EwensParams, c: f64) -> Result<f64> {
    Ok(c * envelope_gammas(params)?.0)
}

/// `Σ E|ξ−p|³ / (Σ E|ξ−p|²)^{3/2}`.
pub fn lyapunov_fraction(params: &EwensParams) -> Result<f64> {
    let m = moments::exact_moments(params);
    if params.n() < 2 || !(m.sigma0_sq > 0.0) {
        return Err(Error::Degenerate("Lyapunov fraction needs n ≥ 2".into()));
    }
    Ok(m.s3_abs / m.sigma0_sq.powf(1.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `γ2/D − γ3`, positive third-moment sum.
    PositiveSkew,
    /// `γ4/D − γ3`, negative third-moment sum.
    NegativeSkew,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub branch: Branch,
    /// Raw formula value; negative values are kept and flagged vacuous.
    pub value: Option<f64>,
    pub vacuous: bool,
}

fn select_branch(c: &Conditions) -> Branch {
    let base = c.variance_positive && c.var_ge_1;
    if base && c.positive_skew {
        Branch::PositiveSkew
    } else if base && c.negative_skew {
        Branch::NegativeSkew
    } else {
        Branch::None
    }
}

pub fn lower_bound(params: &EwensParams, d: f64) -> Result<LowerBound> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!(
            "D must be positive and finite, got {d}"
        )));
    }
    let m = moments::exact_moments(params);
    let branch = select_branch(&evaluate_conditions(params, &m));
    let value = match branch {
        Branch::None => None,
        _ => {
            let g = gamma_values(params)?;
            let lead = if branch == Branch::PositiveSkew {
                g.gamma2
            } else {
                g.gamma4
            };
            Some(lead / d - g.gamma3)
        }
    };
    Ok(LowerBound {
        branch,
        value,
        vacuous: value.is_none_or(|v| v <= 0.0),
    })
}

/// Everything the bounds module knows about one `(n, θ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub theta: f64,
    /// `None` when the lower variance envelope is not positive.
    pub gamma1: Option<f64>,
    pub gamma2: f64,
    pub gamma3: Option<f64>,
    pub gamma4: f64,
    pub conditions: Conditions,
    /// `C·γ1`, present iff the variance-positive condition holds.
    pub upper: Option<f64>,
    pub branch: Branch,
    #[serde(rename = "C")]
    pub c: f64,
}

impl BoundReport {
    /// `γ2/D − γ3` when the positive-skew branch applies.
    pub fn lower_i(&self, d: f64) -> Option<f64> {
        (self.branch == Branch::PositiveSkew)
            .then(|| self.gamma2 / d - self.gamma3.unwrap_or(f64::NAN))
    }

    /// `γ4/D − γ3` when the negative-skew branch applies.
    pub fn lower_ii(&self, d: f64) -> Option<f64> {
        (self.branch == Branch::NegativeSkew)
            .then(|| self.gamma4 / d - self.gamma3.unwrap_or(f64::NAN))
    }
}

pub fn bound_report(params: &EwensParams, c: f64) -> BoundReport {
    bound_report_from(params, &moments::exact_moments(params), c)
}

pub fn bound_report_from(params: &EwensParams, m: &MomentSummary, c: f64) -> BoundReport {
    let conditions = evaluate_conditions(params, m);
    let env = envelope_gammas(params).ok();
    // var_upper > 0 for every n ≥ 1, θ > 0.
    let (gamma2, gamma4) = skew_gammas(params).unwrap_or((f64::NAN, f64::NAN));
    BoundReport {
        n: params.n(),
        theta: params.theta(),
        gamma1: env.map(|e| e.0),
        gamma2,
        gamma3: env.map(|e| e.1),
        gamma4,
        conditions,
        upper: env.map(|e| c * e.0),
        branch: select_branch(&conditions),
        c,
    }
}

/// The Hall–Barbour quantity δ for `Y_i = (ξ_i − p_i)/σ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HallBarbourDelta {
    pub delta: f64,
    /// `Σ E[Y_i² 1{|Y_i| > 1}]`
    pub term_tail: f64,
    /// `Σ E[Y_i⁴ 1{|Y_i| ≤ 1}]`
    pub term_fourth: f64,
    /// `|Σ E[Y_i³ 1{|Y_i| ≤ 1}]|`
    pub term_third_abs: f64,
    /// `Σ σ_i⁴` with `σ_i² = var(Y_i)`
    pub sum_sigma4: f64,
}

impl HallBarbourDelta {
    /// The part of δ kept when δ is used as a lower bound.
    pub fn lower_surrogate(&self) -> f64 {
        self.term_tail + self.term_third_abs
    }
}

pub fn hall_barbour_delta(params: &EwensParams) -> Result<HallBarbourDelta> {
    let m = moments::exact_moments(params);
    if params.n() < 2 || !(m.sigma0_sq > 0.0) {
        return Err(Error::Degenerate("Hall–Barbour δ needs n ≥ 2".into()));
    }
    let sigma = m.sigma0();
    let (mut tail, mut fourth, mut third, mut s4) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=params.n() {
        let (p, q) = (params.p(i), params.q(i));
        // Y_i = q/σ with probability p, −p/σ with probability q.
        for (y, w) in [(q / sigma, p), (-p / sigma, q)] {
            if w == 0.0 {
                continue;
            }
            if y.abs() > 1.0 {
                tail += w * y * y;
            } else {
                let y2 = y * y;
                fourth += w * y2 * y2;
                third += w * y2 * y;
            }
        }
        let var_i = p * q / m.sigma0_sq;
        s4 += var_i * var_i;
    }
    let third_abs = third.abs();
    Ok(HallBarbourDelta {
        delta: tail + fourth + third_abs,
        term_tail: tail,
        term_fourth: fourth,
        term_third_abs: third_abs,
        sum_sigma4: s4,
    })
}
