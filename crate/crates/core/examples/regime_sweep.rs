//! Decay of the normal-approximation error along the couplings θ = √n,
//! θ = n, θ = n/4 and θ = n^1.5, printed as rate-normalized CSV-like rows.
//!
//! ```bash
//! cargo run --release -p ewens-berry --example regime_sweep
//! ```

use ewens_berry::regimes::{self, RegimeSpec, SweepOptions};

fn main() -> ewens_berry::Result<()> {
    let grid = regimes::geometric_grid(1 << 10, 1 << 16, 7)?;
    let specs = [
        RegimeSpec::power(1.0, 0.5)?,
        RegimeSpec::ratio(1.0)?,
        RegimeSpec::ratio(4.0)?,
        RegimeSpec::power(1.0, 1.5)?,
    ];
    for spec in specs {
        println!("# {:?} (case {})", spec.coupling, spec.declared_case);
        let rows = regimes::sweep(&spec, &grid, &SweepOptions::default())?;
        for r in &rows {
            println!(
                "{:>7} θ={:>14.2} kolmo_x={:.4e} upper={} scaled={:.4}",
                r.n,
                r.theta,
                r.kolmo_x,
                r.upper.map_or("-".into(), |u| format!("{u:.4e}")),
                r.scaled_error
            );
        }
        if let Some(band) = regimes::rate_band(&rows, 4) {
            println!("# max/min scaled error over the top 4 points: {band:.4}");
        }
    }
    Ok(())
}
