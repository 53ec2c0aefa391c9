//! The critical ratio c*, where the leading third-moment term vanishes when
//! n/θ → c.
//!
//! ```bash
//! cargo run -p ewens-berry --example critical_ratio
//! ```

use ewens_berry::regimes;

fn main() -> ewens_berry::Result<()> {
    for tol in [1e-4, 1e-8, 1e-12, 1e-14] {
        let c = regimes::solve_cstar(tol)?;
        println!(
            "tol {tol:>7.0e}: c* = {c:.15}  residual {:.2e}",
            regimes::cstar_equation(c)
        );
    }
    for c in [0.5, 1.0, 2.0, regimes::cstar(), 3.0, 10.0] {
        println!("f({c:.6}) = {:+.6e}", regimes::cstar_equation(c));
    }
    Ok(())
}
