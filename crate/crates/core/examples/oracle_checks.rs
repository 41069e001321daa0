//! Analytic results against brute-force oracles: Wilson loops, exact
//! diagonalization of short chains and a mean-field minimisation.
//!
//! cargo run --release --example oracle_checks

use qpt_geom::oracle::{discrete_berry_phase, run_suite};
use qpt_geom::phase::circular_distance;
use qpt_geom::xy_chain::{ground_phase_finite, XyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for c in run_suite(None)? {
        println!("{} {:<34} {:.3e} (tolerance {:.1e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.max_error, c.tolerance);
    }

    println!("\nED loop phase vs mode sum, gamma = 1:");
    for lambda in [0.3, 0.8, 1.2, 2.0] {
        let p = XyParams::new(1.0, lambda, 7)?;
        let ed = discrete_berry_phase(&p, 2000)?;
        let raw = ground_phase_finite(&p).raw.unwrap_or(f64::NAN);
        println!("  lambda = {lambda:.1}: ED {ed:+.6}, analytic {:+.6}, distance {:.2e}", qpt_geom::phase::wrap_phase(raw), circular_distance(ed, raw));
    }
    Ok(())
}
