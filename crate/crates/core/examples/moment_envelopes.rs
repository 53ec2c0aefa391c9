//! Moment sums of the Bernoulli representation next to their closed-form
//! envelopes.
//!
//! ```bash
//! cargo run -p ewens-berry --example moment_envelopes -- 5000 40
//! ```

use ewens_berry::moments::{self, AsymptoticCase};
use ewens_berry::EwensParams;

fn main() -> ewens_berry::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5000, |s| s.parse().expect("n"));
    let theta: f64 = args.next().map_or(40.0, |s| s.parse().expect("θ"));
    let params = EwensParams::new(n, theta)?;

    let m = moments::exact_moments(&params);
    println!("E K = {:.10}   (θ log(1+n/θ) = {:.10})", m.mu0, m.mu_t);
    println!(
        "var K = {:.10}   (approximation {:.10})",
        m.sigma0_sq, m.sigma_t_sq
    );

    println!(
        "\n{:<8} {:>16} {:>16} {:>16}",
        "sum", "lower", "value", "upper"
    );
    for (id, e) in moments::moment_envelopes(&params) {
        println!(
            "{:<8} {:>16.8} {:>16.8} {:>16.8}",
            id.as_str(),
            e.lower,
            e.value,
            e.upper
        );
    }
    for k in 0..=3 {
        let e = moments::power_sum_envelope(&params, k)?;
        println!(
            "{:<8} {:>16.8e} {:>16.8e} {:>16.8e}",
            format!("s{}", k + 1),
            e.lower,
            e.value,
            e.upper
        );
    }

    println!("\nleading behaviour when n/θ is large:");
    for (id, v) in moments::asymptotic_equivalents(&params, AsymptoticCase::A) {
        println!(
            "  {:<8} {:>16.8}  ratio {:.6}",
            id.as_str(),
            v,
            id.value(&m) / v
        );
    }
    for order in 2..=6 {
        println!(
            "Σ E(ξ−p)^{order} = {:.12e}",
            moments::central_moment_sum(&params, order)?
        );
    }
    Ok(())
}
