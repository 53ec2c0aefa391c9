//! Kolmogorov distance between K and the normal law under the three
//! standardizations.
//!
//! ```bash
//! cargo run -p ewens-berry --example kolmogorov_distance -- 100000 1
//! ```

use ewens_berry::exactdist;
use ewens_berry::gaussian::{self, Standardization};
use ewens_berry::EwensParams;

fn main() -> ewens_berry::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100_000, |s| s.parse().expect("n"));
    let theta: f64 = args.next().map_or(1.0, |s| s.parse().expect("θ"));
    let params = EwensParams::new(n, theta)?;
    let dist = exactdist::pmf_poisson_binomial(&params);

    for std in [
        Standardization::exact_moments(&params)?,
        Standardization::approx_moments(&params)?,
        Standardization::log_leading(&params)?,
    ] {
        let r = gaussian::kolmogorov_distance(&dist, &std)?;
        println!(
            "{:<16} μ = {:>12.6} σ = {:>10.6}  d_K = {:.6e} at z = {:.6} ({:?})",
            format!("{:?}", std.kind),
            std.mu,
            std.sigma,
            r.distance,
            r.argmax_point,
            r.side
        );
    }
    Ok(())
}
