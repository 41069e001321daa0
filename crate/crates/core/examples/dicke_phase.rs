//! Dicke model: β_g/N from the adiabatic oscillator ground state for growing
//! qubit number, next to the superradiant cusp of the limit.
//!
//! cargo run --release --example dicke_phase -- [D]

use qpt_geom::dicke::{dicke_phase_finite, dicke_phase_limit, DickeParams, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10.0);
    let sizes = [8usize, 16, 32, 64];

    print!("{:>6}", "alpha");
    for n in sizes {
        print!(" {:>10}", format!("N={n}"));
    }
    println!(" {:>10}", "limit");
    for i in 0..=12 {
        let alpha = 0.25 * i as f64;
        print!("{alpha:6.2}");
        for n in sizes {
            let r = dicke_phase_finite(&DickeParams::from_dimensionless(d, alpha, n)?, &GridSpec::default())?;
            print!(" {:10.5}", r.beta_g / n as f64);
        }
        println!(" {:10.5}", dicke_phase_limit(alpha));
    }
    Ok(())
}
