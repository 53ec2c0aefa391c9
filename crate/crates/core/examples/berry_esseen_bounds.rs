//! Upper and lower bounds on the normal-approximation error, with the
//! measured distance for comparison.
//!
//! ```bash
//! cargo run -p ewens-berry --example berry_esseen_bounds
//! ```

use ewens_berry::bounds::{self, BERRY_ESSEEN_C};
use ewens_berry::exactdist;
use ewens_berry::gaussian::{self, Standardization};
use ewens_berry::EwensParams;

fn main() -> ewens_berry::Result<()> {
    // D has no published value; 1.0 only shows the shape of the lower bound.
    let d = 1.0;
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>12} {:>14} {:>12}",
        "n", "θ", "measured", "C·γ1", "Lyapunov", "branch", "lower(D=1)"
    );
    for (n, theta) in [
        (1_000, 1.0),
        (100_000, 1.0),
        (100_000, 300.0),
        (20_000, 20_000.0),
        (4_000, 1e6),
        (10_000, 1e6),
    ] {
        let params = EwensParams::new(n, theta)?;
        let dist = exactdist::pmf_poisson_binomial(&params);
        let measured =
            gaussian::kolmogorov_distance(&dist, &Standardization::exact_moments(&params)?)?
                .distance;
        let report = bounds::bound_report(&params, BERRY_ESSEEN_C);
        let lower = bounds::lower_bound(&params, d)?;
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4e}"));
        println!(
            "{n:>8} {theta:>10} {measured:>12.4e} {:>12} {:>12.4e} {:>14} {:>12}",
            show(report.upper),
            bounds::lyapunov_fraction(&params)?,
            format!("{:?}", lower.branch),
            show(lower.value),
        );
    }

    let params = EwensParams::new(1_000, 1.0)?;
    let delta = bounds::hall_barbour_delta(&params)?;
    println!(
        "\nHall–Barbour δ at n = 1000, θ = 1: {:.6e} (tail {}, fourth {:.3e}, third {:.3e})",
        delta.delta, delta.term_tail, delta.term_fourth, delta.term_third_abs
    );
    Ok(())
}
