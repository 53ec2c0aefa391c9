//! Exact law of the number of blocks K for a rational θ, computed two ways.
//!
//! ```bash
//! cargo run -p ewens-berry --example exact_distribution -- 12 3/2
//! ```

use ewens_berry::exactdist::{self, StirlingTable};
use ewens_berry::{EwensParams, Theta};

fn main() -> ewens_berry::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("n"));
    let theta: Theta = args.next().as_deref().unwrap_or("3/2").parse()?;
    let params = EwensParams::with_theta(n, theta)?;

    let table = StirlingTable::build(n)?;
    let by_stirling = exactdist::pmf_stirling(&params, &table)?;
    let by_bernoulli = exactdist::pmf_poisson_binomial(&params);
    let cdf = exactdist::cdf_best(&by_stirling);

    println!("n = {n}, θ = {}", params.theta_param());
    println!(
        "{:>4} {:>24} {:>22} {:>22}",
        "x", "P(K = x)", "float pmf", "CDF"
    );
    let exact = by_stirling.exact_pmf().expect("rational θ with small n");
    for (x, (p, c)) in by_stirling.pmf().iter().zip(&cdf).enumerate() {
        println!(
            "{:>4} {:>24} {p:>22.15e} {c:>22.15e}",
            x + 1,
            exact[x].to_string()
        );
    }

    let gap = by_stirling
        .pmf()
        .iter()
        .zip(by_bernoulli.pmf())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max |Stirling − Bernoulli| = {gap:.3e}");
    println!(
        "rational paths agree: {}",
        by_stirling.exact_pmf() == by_bernoulli.exact_pmf()
    );
    println!("total mass = {}", exactdist::total_mass(&by_bernoulli));
    Ok(())
}
