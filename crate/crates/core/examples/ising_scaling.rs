//! Finite-size scaling of the transverse-field Ising and anisotropic XY chains.
//!
//! cargo run --release --example ising_scaling -- [gamma]

use qpt_geom::pipeline::{run_scaling, ScalingModel, DEFAULT_SIZES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gamma: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    let report = run_scaling(&ScalingModel::Xy { gamma }, &DEFAULT_SIZES)?;

    println!("gamma = {gamma}");
    println!("{:>7} {:>20} {:>14}", "N", "lambda_m", "height/pi");
    for p in &report.peaks {
        println!("{:>7} {:>20.12} {:>14.8}", p.n, p.lambda_m, p.height_over_pi);
    }
    if let Some(k1) = report.kappa1 {
        println!("kappa1         = {k1:.4}");
    }
    if let Some(k2) = report.kappa2 {
        println!("kappa2         = {k2:.4}");
    }
    if let Some(s) = report.log_log_slope {
        println!("log-log slope  = {s:.4}");
    }
    if let Some(e) = report.shift_exponent {
        println!("shift exponent = {e:.4}");
    }
    println!("nu = {:.4}, z = {:.4}, z*nu = {:.4}", report.nu, report.z, report.z_nu);
    Ok(())
}
