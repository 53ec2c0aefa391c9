//! # ewens-berry
//!
//! Exact law of the number of blocks `K` of a Ewens partition, and explicit
//! Berry–Esseen type error bounds for its normal approximation.
//!
//! `K` with parameters `(n, θ)` has
//!
//! ```text
//! P(K = x) = s̄(n, x) θ^x / (θ)_n,      x = 1, …, n,
//! ```
//!
//! where `(θ)_n = θ(θ+1)⋯(θ+n−1)` is the rising factorial and `s̄(n, x)` are the
//! unsigned Stirling numbers of the first kind. Equivalently `K` is a sum of
//! independent Bernoulli variables with success probabilities
//! `p_i = θ/(θ+i−1)`.
//!
//! ## Modules
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`exactdist`] | Stirling tables, pmf via Stirling numbers and via Bernoulli convolution, CDF |
//! | [`moments`] | Power sums, central-moment sums, closed-form envelopes, asymptotic equivalents |
//! | [`gaussian`] | Φ, standardizations, exact Kolmogorov distance, shift/scale bounds for Φ |
//! | [`bounds`] | γ1–γ4, applicability conditions, upper/lower bounds, Lyapunov fraction, Hall–Barbour δ |
//! | [`regimes`] | Couplings θ = θ(n), case classification, the critical ratio c*, decay-rate sweeps |
//! | [`cli`] | The `ewens-berry` command-line front end |
//!
//! ## Quick start
//!
//! ```rust
//! use ewens_berry::{exactdist, gaussian, bounds, EwensParams};
//! use ewens_berry::gaussian::Standardization;
//!
//! let params = EwensParams::new(4096, 8.0).unwrap();
//! let dist = exactdist::pmf_poisson_binomial(&params);
//! let std = Standardization::exact_moments(&params).unwrap();
//! let measured = gaussian::kolmogorov_distance(&dist, &std).unwrap();
//! let upper = bounds::upper_bound(&params).unwrap();
//! assert!(measured.distance <= upper);
//! ```

// NaN must fail validation, so `!(x > 0.0)` is intended throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
mod error;
pub mod exactdist;
pub mod gaussian;
pub mod moments;
mod params;
pub mod regimes;
pub mod summation;

pub use error::{Error, Result};
pub use params::{EwensParams, Theta};
