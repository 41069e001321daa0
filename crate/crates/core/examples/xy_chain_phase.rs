//! Ground-state geometric phase of the XY chain across the Ising transition,
//! finite ring against the thermodynamic limit.
//!
//! cargo run --release --example xy_chain_phase -- [gamma] [N]

use std::f64::consts::PI;

use qpt_geom::xy_chain::{ground_phase_finite, ground_phase_limit, phase_derivative_finite, phase_derivative_limit, XyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let gamma: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(101);

    println!("{:>6} {:>12} {:>12} {:>14} {:>14}", "lambda", "beta_N/pi", "beta_inf/pi", "dbeta_N", "dbeta_inf");
    for i in 0..=20 {
        let lambda = 0.1 * i as f64;
        let p = XyParams::new(gamma, lambda, n)?;
        let finite = ground_phase_finite(&p).beta_g;
        let limit = ground_phase_limit(gamma, lambda)?.beta_g;
        let d_finite = phase_derivative_finite(&p)?;
        // the limit derivative diverges at λ = 1
        let d_limit = phase_derivative_limit(gamma, lambda).map(|d| format!("{d:14.6}")).unwrap_or_else(|_| format!("{:>14}", "inf"));
        println!("{lambda:6.2} {:12.6} {:12.6} {d_finite:14.6} {d_limit}", finite / PI, limit / PI);
    }
    Ok(())
}
