//! LMG model: β_g(h) at fixed N, and the size dependence just above h = 1.
//!
//! cargo run --release --example lmg_divergence -- [gamma]

use std::f64::consts::PI;

use qpt_geom::lmg::{lmg_phase, lmg_size_scaling, LmgParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gamma: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.0);

    println!("N = 200, gamma = {gamma}");
    for i in 0..=40 {
        let h = 0.05 * i as f64;
        match lmg_phase(&LmgParams::new(gamma, h, 200)?) {
            Ok(r) => println!("h = {h:5.2}  beta_g/pi = {:12.6}", r.beta_g / PI),
            Err(e) => println!("h = {h:5.2}  {e}"),
        }
    }

    let sizes: Vec<usize> = (1..=10).map(|k| 50 * k).collect();
    for eps in [1e-6, 1e-8] {
        let fit = lmg_size_scaling(gamma, 1.0 + eps, &sizes)?;
        println!("h = 1 + {eps:e}: beta_g ≈ {:.4} N + {:.4}  (R² = {:.5})", fit.slope, fit.intercept, fit.r_squared);
    }
    Ok(())
}
