//! How far Φ moves under a shift or a rescaling of its argument.
//!
//! ```bash
//! cargo run -p ewens-berry --example shift_scale
//! ```

use ewens_berry::gaussian;

fn main() -> ewens_berry::Result<()> {
    println!(
        "{:>6} {:>5} {:>12} {:>12} {:>12} {:>12}",
        "α", "β", "shift", "bound", "scale", "bound"
    );
    for alpha in [0.01, 0.5, 2.0] {
        for beta in [0.5, 0.9, 1.1, 2.0] {
            let grid = gaussian::default_probe_grid(alpha, beta);
            let r = gaussian::shift_scale_check(alpha, beta, &grid)?;
            println!(
                "{alpha:>6} {beta:>5} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}",
                r.shift_observed, r.shift_bound, r.scale_observed, r.scale_bound
            );
            assert!(r.dominated());
        }
    }
    Ok(())
}
