use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The concentration parameter θ.
///
/// Always carries a double-precision value. When θ was supplied as an
/// integer or a `p/q` fraction it also carries the exact rational, which
/// enables the exact-rational evaluation paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    value: f64,
    exact: Option<BigRational>,
}

impl Theta {
    pub fn from_f64(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParams(format!(
                "theta must be positive and finite, got {value}"
            )));
        }
        Ok(Self { value, exact: None })
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if numer == 0 || denom == 0 {
            return Err(Error::InvalidParams(format!(
                "theta = {numer}/{denom} needs a positive numerator and denominator"
            )));
        }
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(exact: BigRational) -> Result<Self> {
        if !exact.is_positive() {
            return Err(Error::InvalidParams(format!(
                "theta must be positive, got {exact}"
            )));
        }
        let value = exact
            .to_f64()
            .filter(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(|| Error::InvalidParams(format!("theta = {exact} is not representable")))?;
        Ok(Self {
            value,
            exact: Some(exact),
        })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }
}

impl FromStr for Theta {
    type Err = Error;

    /// Accepts `p/q` and plain integers (exact), or any decimal float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParams(format!("cannot parse theta from {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if !p.is_positive() || !q.is_positive() {
                return Err(Error::InvalidParams(format!(
                    "theta = {s} needs positive integers p/q"
                )));
            }
            return Self::from_rational(BigRational::new(p, q));
        }
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            if p.is_zero() {
                return Err(Error::InvalidParams("theta must be positive, got 0".into()));
            }
            return Self::from_rational(BigRational::from_integer(p));
        }
        Self::from_f64(s.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// The pair `(n, θ)` indexing the law of `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct EwensParams {
    n: usize,
    theta: Theta,
}

impl EwensParams {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        Self::with_theta(n, Theta::from_f64(theta)?)
    }

    /// `θ = numer/denom`, carried exactly.
    pub fn rational(n: usize, numer: u64, denom: u64) -> Result<Self> {
        Self::with_theta(n, Theta::from_ratio(numer, denom)?)
    }

    pub fn with_theta(n: usize, theta: Theta) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        Ok(Self { n, theta })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta.value()
    }

    pub fn theta_param(&self) -> &Theta {
        &self.theta
    }

    /// Success probability of the `i`-th Bernoulli summand, `i` 1-based.
    #[inline]
    pub fn p(&self, i: usize) -> f64 {
        let t = self.theta();
        t / (t + (i - 1) as f64)
    }

    /// `1 − p_i`, evaluated without cancellation.
    #[inline]
    pub fn q(&self, i: usize) -> f64 {
        let t = self.theta();
        let m = (i - 1) as f64;
        m / (t + m)
    }
}
