//! A test qubit coupled to an Ising ring: its geometric phase derivative
//! sharpens into a peak at the ring's critical point as the ring grows.
//!
//! cargo run --release --example probe_qubit

use std::f64::consts::PI;

use qpt_geom::pipeline::{peak_table, ScalingModel};
use qpt_geom::probe::{probe_phase, probe_phase_xx_limit, ProbeParams};
use qpt_geom::SystemSize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mu, nu, eta) = (0.1, 2.0, 0.5);

    let rows = peak_table(&ScalingModel::Probe { mu, nu, eta, gamma: 1.0 }, &[13, 51, 251, 501])?;
    println!("{:>5} {:>12} {:>12}", "N", "lambda_m", "peak");
    for r in rows {
        println!("{:>5} {:12.6} {:12.6}", r.n, r.lambda_m, r.height);
    }

    println!("\nXX ring in the thermodynamic limit:");
    for i in 0..=8 {
        let lambda = 0.25 * i as f64;
        let closed = probe_phase_xx_limit(mu, nu, eta, lambda)?.beta_g;
        let general = probe_phase(&ProbeParams::new(mu, nu, eta, 0.0, lambda, SystemSize::Thermodynamic)?)?.beta_g;
        println!("lambda = {lambda:4.2}  beta_g/pi = {:.8}  (|closed - general| = {:.1e})", closed / PI, (closed - general).abs());
    }
    Ok(())
}
