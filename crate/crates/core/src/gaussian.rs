//! Standard normal distribution and sup-norm distances to it.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::{self, LengthDistribution};
use crate::moments::{self, MomentSummary};
use crate::params::EwensParams;

/// Standard normal CDF.
pub fn phi_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn phi_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardizationKind {
    /// `(K − μ0)/σ0` with the exact mean and variance.
    ExactMoments,
    /// `(K − μ_T)/σ_T` with `μ_T = θ log(1+n/θ)`.
    ApproxMoments,
    /// `(K − θ log n)/√(θ log n)`.
    LogLeading,
}

/// An affine standardization `z = (x − mu)/sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Standardization {
    pub kind: StandardizationKind,
    pub mu: f64,
    pub sigma: f64,
}

impl Standardization {
    pub fn exact_moments(params: &EwensParams) -> Result<Self> {
        Self::from_summary(
            StandardizationKind::ExactMoments,
            params,
            &moments::exact_moments(params),
        )
    }

    pub fn approx_moments(params: &EwensParams) -> Result<Self> {
        Self::from_summary(
            StandardizationKind::ApproxMoments,
            params,
            &moments::exact_moments(params),
        )
    }

    pub fn log_leading(params: &EwensParams) -> Result<Self> {
        Self::from_summary(
            StandardizationKind::LogLeading,
            params,
            &moments::exact_moments(params),
        )
    }

    /// Builds any kind, reusing an already computed moment summary.
    pub fn from_summary(
        kind: StandardizationKind,
        params: &EwensParams,
        m: &MomentSummary,
    ) -> Result<Self> {
        if params.n() < 2 {
            return Err(Error::Degenerate(format!(
                "{kind:?} standardization needs n ≥ 2 (K is constant at n = 1)"
            )));
        }
        let (mu, sigma) = match kind {
            StandardizationKind::ExactMoments => (m.mu0, m.sigma0()),
            StandardizationKind::ApproxMoments => (m.mu_t, m.sigma_t()),
            StandardizationKind::LogLeading => {
                let l = params.theta() * (params.n() as f64).ln();
                (l, l.sqrt())
            }
        };
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Degenerate(format!("{kind:?} scale is {sigma}")));
        }
        Ok(Self { kind, mu, sigma })
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `F(x_k⁻)`, the CDF just before the jump.
    LeftLimit,
    /// `F(x_k)`, the CDF at the jump.
    RightValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KolmogorovReport {
    pub distance: f64,
    /// Standardized jump location where the supremum is attained.
    pub argmax_point: f64,
    pub side: Side,
}

/// `sup_z |F(z) − Φ(z)|` for a step CDF with jumps at `points` (ascending),
/// after standardizing by `(mu, sigma)`.
///
/// Between jumps `F` is constant and `Φ` increasing, so the supremum is
/// attained at a jump on one of its two sides.
pub fn kolmogorov_distance_points(
    cdf: &[f64],
    points: &[f64],
    mu: f64,
    sigma: f64,
) -> Result<KolmogorovReport> {
    if !(sigma > 0.0) {
        return Err(Error::Degenerate(format!(
            "scale must be positive, got {sigma}"
        )));
    }
    if cdf.len() != points.len() || cdf.is_empty() {
        return Err(Error::Domain(
            "cdf and jump points must be nonempty and aligned".into(),
        ));
    }
    let mut best = KolmogorovReport {
        distance: 0.0,
        argmax_point: (points[0] - mu) / sigma,
        side: Side::LeftLimit,
    };
    let mut before = 0.0;
    for (&f, &x) in cdf.iter().zip(points) {
        let z = (x - mu) / sigma;
        let g = phi_cdf(z);
        let left = (before - g).abs();
        let right = (f - g).abs();
        if left > best.distance {
            best = KolmogorovReport {
                distance: left,
                argmax_point: z,
                side: Side::LeftLimit,
            };
        }
        if right > best.distance {
            best = KolmogorovReport {
                distance: right,
                argmax_point: z,
                side: Side::RightValue,
            };
        }
        before = f;
    }
    Ok(best)
}

/// Exact Kolmogorov distance between the standardized law of `K` and Φ.
pub fn kolmogorov_distance(
    dist: &LengthDistribution,
    std: &Standardization,
) -> Result<KolmogorovReport> {
    if dist.n() < 2 {
        return Err(Error::Degenerate("K is constant at n = 1".into()));
    }
    let cdf = exactdist::cdf_best(dist);
    let points: Vec<f64> = (1..=dist.n()).map(|x| x as f64).collect();
    kolmogorov_distance_points(&cdf, &points, std.mu, std.sigma)
}

/// Observed suprema of the shift and scale differences of Φ over a probe
/// grid, with their closed-form bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftScaleReport {
    pub alpha: f64,
    pub beta: f64,
    /// `max |Φ(x+α) − Φ(x)|` over the grid.
    pub shift_observed: f64,
    /// `|α|/√(2π)`
    pub shift_bound: f64,
    /// `max |Φ(βx) − Φ(x)|` over the grid.
    pub scale_observed: f64,
    /// `max(β,1)|1 − 1/β|/√(2πe)`
    pub scale_bound: f64,
}

impl ShiftScaleReport {
    pub fn dominated(&self) -> bool {
        self.shift_observed <= self.shift_bound && self.scale_observed <= self.scale_bound
    }
}

pub fn shift_bound(alpha: f64) -> f64 {
    alpha.abs() / (2.0 * PI).sqrt()
}

pub fn scale_bound(beta: f64) -> f64 {
    beta.max(1.0) * (1.0 - 1.0 / beta).abs() / (2.0 * PI * std::f64::consts::E).sqrt()
}

/// `10⁵` evenly spaced points on `[−10, 10]` plus the analytic maximizers
/// `−α/2` and `±√(2 log β/(β² − 1))`.
pub fn default_probe_grid(alpha: f64, beta: f64) -> Vec<f64> {
    const POINTS: usize = 100_000;
    let mut grid: Vec<f64> = (0..POINTS)
        .map(|i| -10.0 + 20.0 * i as f64 / (POINTS - 1) as f64)
        .collect();
    grid.push(-alpha / 2.0);
    if beta > 0.0 && beta != 1.0 {
        let x = (2.0 * beta.ln() / (beta * beta - 1.0)).sqrt();
        grid.extend([x, -x]);
    }
    grid
}

pub fn shift_scale_check(alpha: f64, beta: f64, probe_grid: &[f64]) -> Result<ShiftScaleReport> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    if probe_grid.is_empty() {
        return Err(Error::Domain("probe grid is empty".into()));
    }
    let sup = |f: &dyn Fn(f64) -> f64| probe_grid.iter().map(|&x| f(x).abs()).fold(0.0, f64::max);
    Ok(ShiftScaleReport {
        alpha,
        beta,
        shift_observed: sup(&|x| phi_cdf(x + alpha) - phi_cdf(x)),
        shift_bound: shift_bound(alpha),
        scale_observed: sup(&|x| phi_cdf(beta * x) - phi_cdf(x)),
        scale_bound: scale_bound(beta),
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::exactdist::pmf_poisson_binomial;

    // Reference values from 50-digit arithmetic.
    const PHI_REFERENCE: [(f64, f64); 10] = [
        (0.0, 0.5),
        (1.959963985, 0.9750000000268815622991789),
        (-8.0, 6.220960574271784123515995e-16),
        (1.0, 0.8413447460685429485852325),
        (-1.0, 0.1586552539314570514147675),
        (3.0, 0.9986501019683699054733482),
        (-5.0, 2.866515718791939116737523e-7),
        (-12.0, 1.776482112077678997696171e-33),
        (7.5, 0.9999999999999680910832709),
        (-37.0, 5.725571222524576822683193e-300),
    ];

    #[test]
    fn phi_matches_reference() {
        for (x, want) in PHI_REFERENCE {
            let got = phi_cdf(x);
            assert!((got - want).abs() <= 1e-15, "Φ({x}) = {got}, want {want}");
            if want < 1e-3 {
                assert!((got - want).abs() <= 1e-13 * want, "relative Φ({x})");
            }
        }
        assert_eq!(phi_cdf(0.0), 0.5);
    }

    #[test]
    fn phi_symmetry_and_monotonicity() {
        let mut prev = 0.0;
        for i in -4000..=4000 {
            let x = i as f64 / 400.0;
            let v = phi_cdf(x);
            assert!((phi_cdf(-x) - (1.0 - v)).abs() <= 2.0 * f64::EPSILON);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn two_point_distance() {
        let p = EwensParams::rational(2, 1, 1).unwrap();
        let d = pmf_poisson_binomial(&p);
        let s = Standardization::exact_moments(&p).unwrap();
        assert_eq!((s.mu, s.sigma), (1.5, 0.5));
        let r = kolmogorov_distance(&d, &s).unwrap();
        let want = phi_cdf(1.0) - 0.5;
        assert!((r.distance - want).abs() < 1e-16);
        assert!((r.distance - 0.3413).abs() < 1e-4);
    }

    #[test]
    fn degenerate_standardizations() {
        let p = EwensParams::new(1, 2.0).unwrap();
        assert!(matches!(
            Standardization::exact_moments(&p),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            Standardization::log_leading(&p),
            Err(Error::Degenerate(_))
        ));
        let d = pmf_poisson_binomial(&p);
        let fake = Standardization {
            kind: StandardizationKind::ExactMoments,
            mu: 1.0,
            sigma: 1.0,
        };
        assert!(kolmogorov_distance(&d, &fake).is_err());
        assert!(kolmogorov_distance_points(&[1.0], &[1.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn standardization_values() {
        let p = EwensParams::new(64, 3.0).unwrap();
        let m = moments::exact_moments(&p);
        let x = Standardization::exact_moments(&p).unwrap();
        assert_eq!((x.mu, x.sigma), (m.mu0, m.sigma0()));
        let y = Standardization::approx_moments(&p).unwrap();
        assert_eq!((y.mu, y.sigma), (m.mu_t, m.sigma_t()));
        let z = Standardization::log_leading(&p).unwrap();
        assert!((z.mu - 3.0 * 64f64.ln()).abs() < 1e-14);
        assert!((z.sigma - z.mu.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dense_scan_agrees_with_jump_evaluation() {
        let p = EwensParams::new(1000, 1.0).unwrap();
        let d = pmf_poisson_binomial(&p);
        let s = Standardization::exact_moments(&p).unwrap();
        let r = kolmogorov_distance(&d, &s).unwrap();

        // Scan oracle: evaluate |F − Φ| on a refined grid, including points
        // an ε either side of every jump.
        let cdf = exactdist::cdf(&d);
        let f_at = |x: f64| -> f64 {
            let k = x.floor();
            if k < 1.0 {
                0.0
            } else {
                cdf[(k as usize).min(1000) - 1]
            }
        };
        let mut scan: f64 = 0.0;
        for k in 1..=1000 {
            for off in [-1e-9, 0.0, 0.25, 0.5, 0.75] {
                let x = k as f64 + off;
                scan = scan.max((f_at(x) - phi_cdf(s.apply(x))).abs());
            }
        }
        assert!(
            (scan - r.distance).abs() < 1e-10,
            "{scan} vs {}",
            r.distance
        );
        assert!(r.distance > 0.0 && r.distance < 1.0);
    }

    #[test]
    fn affine_reexpression_is_invariant() {
        let p = EwensParams::new(300, 4.0).unwrap();
        let d = pmf_poisson_binomial(&p);
        let s = Standardization::exact_moments(&p).unwrap();
        let base = kolmogorov_distance(&d, &s).unwrap().distance;
        let cdf = exactdist::cdf_best(&d);
        // Move to the standardized grid and compare against N(0, 1).
        let z: Vec<f64> = (1..=300).map(|x| s.apply(x as f64)).collect();
        let moved = kolmogorov_distance_points(&cdf, &z, 0.0, 1.0)
            .unwrap()
            .distance;
        assert!((moved - base).abs() <= 1e-14);
        // Raw grid scaled by 2 and shifted by 7, standardization composed.
        let raw: Vec<f64> = (1..=300).map(|x| 7.0 + 2.0 * x as f64).collect();
        let composed = kolmogorov_distance_points(&cdf, &raw, 7.0 + 2.0 * s.mu, 2.0 * s.sigma)
            .unwrap()
            .distance;
        assert!((composed - base).abs() <= 1e-14);
    }

    #[test]
    fn shift_scale_examples() {
        let grid = default_probe_grid(0.0, 1.0);
        let r = shift_scale_check(0.0, 1.0, &grid).unwrap();
        assert_eq!((r.shift_observed, r.shift_bound), (0.0, 0.0));
        assert_eq!((r.scale_observed, r.scale_bound), (0.0, 0.0));

        let r = shift_scale_check(0.5, 1.0, &default_probe_grid(0.5, 1.0)).unwrap();
        let want = phi_cdf(0.25) - phi_cdf(-0.25);
        assert!((r.shift_observed - want).abs() < 1e-15);
        assert!((r.shift_observed - 0.1974).abs() < 1e-4);
        assert!((r.shift_bound - 0.1995).abs() < 1e-4);
        assert!(r.dominated());

        assert!(shift_scale_check(0.1, 0.0, &grid).is_err());
        assert!(shift_scale_check(0.1, -1.0, &grid).is_err());
        assert!(shift_scale_check(0.1, 1.0, &[]).is_err());
    }

    #[test]
    fn approx_and_exact_distances_within_shift_scale_budget() {
        for (n, t) in [(50, 1.0), (400, 5.0), (2000, 30.0), (1000, 2000.0)] {
            let p = EwensParams::new(n, t).unwrap();
            let d = pmf_poisson_binomial(&p);
            let m = moments::exact_moments(&p);
            let x = kolmogorov_distance(&d, &Standardization::exact_moments(&p).unwrap())
                .unwrap()
                .distance;
            let y = kolmogorov_distance(&d, &Standardization::approx_moments(&p).unwrap())
                .unwrap()
                .distance;
            let (s0, st) = (m.sigma0(), m.sigma_t());
            let budget =
                (m.mu_t - m.mu0).abs() / (s0.min(st) * (2.0 * PI).sqrt()) + scale_bound(st / s0);
            assert!(
                (x - y).abs() <= budget + 1e-14,
                "n={n} θ={t}: {x} {y} {budget}"
            );
        }
    }
}
