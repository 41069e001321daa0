//! Quantum geometric tensor of a spin-1/2 in a field, from the spectral sum
//! and from finite differences of the ground state, plus the fidelity dip of
//! the Ising chain at λ = 1.
//!
//! cargo run --release --example geometric_tensor

use nalgebra::DMatrix;
use qpt_geom::geom_tensor::{qgt_numeric, qgt_spectral, xy_mode_fidelity, HamiltonianFamily, ParamPoint, SpectralModel, C64, FD_STEP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = |re: f64, im: f64| C64::new(re, im);
    // H = −(sinθ cosφ σx + sinθ sinφ σy + cosθ σz)
    let family = HamiltonianFamily::new(|p: &ParamPoint| {
        let (t, f) = (p.0[0], p.0[1]);
        let (st, ct) = t.sin_cos();
        DMatrix::from_row_slice(2, 2, &[c(-ct, 0.0), C64::from_polar(-st, -f), C64::from_polar(-st, f), c(ct, 0.0)])
    });
    let grad = |p: &ParamPoint, mu: usize| {
        let (t, f) = (p.0[0], p.0[1]);
        let (st, ct) = t.sin_cos();
        if mu == 0 {
            DMatrix::from_row_slice(2, 2, &[c(st, 0.0), C64::from_polar(-ct, -f), C64::from_polar(-ct, f), c(-st, 0.0)])
        } else {
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), C64::from_polar(-st, -f) * c(0.0, -1.0), C64::from_polar(-st, f) * c(0.0, 1.0), c(0.0, 0.0)])
        }
    };

    let eta = ParamPoint::new(vec![1.0, 0.4])?;
    let spectral = qgt_spectral(&family, &eta, grad)?;
    let numeric = qgt_numeric(|p: &ParamPoint| family.spectrum(p).map(|s| s.ground()), &eta, FD_STEP)?;
    for (name, q) in [("spectral", &spectral.q), ("numeric", &numeric.q)] {
        println!("{name:>8}: g_θθ = {:.12}  g_φφ = {:.12}  Im Q_θφ = {:.12}", q[(0, 0)].re, q[(1, 1)].re, q[(0, 1)].im);
    }
    let s = 1.0f64.sin();
    println!("expected: g_θθ = {:.12}  g_φφ = {:.12}  Im Q_θφ = {:.12}", 0.25, s * s / 4.0, s / 4.0);

    println!("Ising chain, N = 1001, fidelity F(λ, λ + 1e-3):");
    for i in 0..=10 {
        let l = 0.95 + 0.01 * i as f64;
        println!("  lambda = {l:.2}  1 - F = {:.3e}", 1.0 - xy_mode_fidelity(1.0, l, l + 1e-3, 1001)?);
    }
    Ok(())
}
