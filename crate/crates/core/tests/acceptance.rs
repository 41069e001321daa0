//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qpt_geom::dicke::{dicke_phase_finite, dicke_phase_limit, DickeParams, GridSpec};
use qpt_geom::lmg::{lmg_phase, lmg_size_scaling, LmgParams};
use qpt_geom::oracle::{
    check_curvature, check_ed_berry_phase, check_fidelity, check_mode_loops, dicke_meanfield_oracle, OracleCheck,
};
use qpt_geom::pipeline::{peak_table, run_scaling, ScalingModel, ScalingReport, DEFAULT_SIZES};
use qpt_geom::probe::{probe_phase, probe_phase_xx_limit, ProbeParams};
use qpt_geom::scaling::dynamical_exponent;
use qpt_geom::SystemSize;

use proptest::strategy::{Strategy, ValueTree};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{} [{:.1} s, budget {} s]", out.detail, elapsed.as_secs_f64(), budget.as_secs());
    if elapsed > budget {
        out.passed = false;
        out.detail.push_str(" over budget");
    }
    out
}

fn ising_report() -> &'static ScalingReport {
    use std::sync::OnceLock;
    static REPORT: OnceLock<ScalingReport> = OnceLock::new();
    REPORT.get_or_init(|| run_scaling(&ScalingModel::Xy { gamma: 1.0 }, &DEFAULT_SIZES).expect("Ising scaling run"))
}

fn kappa1() -> Outcome {
    let r = ising_report();
    let k1 = r.kappa1.unwrap_or(f64::NAN);
    Outcome::new(within(k1, 0.3121, 0.02), format!("kappa1 = {k1:.4} (R² {:.5})", r.kappa1_r_squared.unwrap_or(f64::NAN)))
}

fn kappa2() -> Outcome {
    let r = ising_report();
    let k2 = r.kappa2.unwrap_or(f64::NAN);
    Outcome::new(within(k2, -0.3123, 0.02), format!("kappa2 = {k2:.4} (R² {:.5})", r.kappa2_r_squared.unwrap_or(f64::NAN)))
}

fn nu_ratio() -> Outcome {
    let half = match run_scaling(&ScalingModel::Xy { gamma: 0.5 }, &DEFAULT_SIZES) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("gamma = 0.5 run failed: {e}")),
    };
    let one = ising_report();
    let ok = within(one.nu, 1.0, 0.05) && within(half.nu, 1.0, 0.05);
    Outcome::new(ok, format!("nu(1) = {:.4}, nu(0.5) = {:.4}", one.nu, half.nu))
}

fn shift_exponent() -> Outcome {
    let r = ising_report();
    let e = r.shift_exponent.unwrap_or(f64::NAN);
    Outcome::new(within(e, 1.803, 0.15), format!("|lambda_m - 1| ~ N^-{e:.4} (R² {:.5})", r.shift_r_squared.unwrap_or(f64::NAN)))
}

fn xx_class() -> Outcome {
    let xx = match run_scaling(&ScalingModel::Xy { gamma: 0.0 }, &[]) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("XX run failed: {e}")),
    };
    let slope = xx.log_log_slope.unwrap_or(f64::NAN);
    let (z1, z0) = match (dynamical_exponent(1.0), dynamical_exponent(0.0)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(false, format!("dynamical exponent failed: {e}")),
    };
    let ising = ising_report();
    let ok = within(slope, -0.5, 0.02)
        && within(z1, 1.0, 0.01)
        && within(z0, 2.0, 0.01)
        && within(z1 * ising.nu, 1.0, 0.05)
        && within(z0 * xx.nu, 1.0, 0.05);
    Outcome::new(
        ok,
        format!(
            "slope = {slope:.4}, z(1) = {z1:.4}, z(0) = {z0:.4}, z·nu = {:.4} / {:.4}",
            z1 * ising.nu,
            z0 * xx.nu
        ),
    )
}

fn dicke() -> Outcome {
    // closed form against a direct minimisation of the mean-field energy
    let mut worst: f64 = 0.0;
    for &alpha in &[0.2, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0] {
        let d = 10.0f64;
        let formula = if alpha <= 1.0 { 0.0 } else { PI * (1.0 - 1.0 / alpha) };
        let (_, sx) = match dicke_meanfield_oracle(d, (2.0 * d * alpha).sqrt()) {
            Ok(v) => v,
            Err(e) => return Outcome::new(false, format!("mean-field oracle failed: {e}")),
        };
        worst = worst.max((dicke_phase_limit(alpha) - formula).abs()).max((PI * (1.0 + sx) - formula).abs());
    }
    let mut per_n = Vec::new();
    for &n in &[8usize, 16, 32, 64] {
        let b = DickeParams::from_dimensionless(10.0, 2.0, n).and_then(|p| dicke_phase_finite(&p, &GridSpec::default()));
        match b {
            Ok(r) => per_n.push(r.beta_g / n as f64),
            Err(e) => return Outcome::new(false, format!("N = {n} failed: {e}")),
        }
    }
    let gaps: Vec<f64> = per_n.iter().map(|b| (b - PI / 2.0).abs()).collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let ok = worst < 1e-8 && monotone && gaps[3] < 0.1;
    Outcome::new(
        ok,
        format!(
            "limit error {worst:.1e}; beta/N = {} ; final gap {:.4}",
            per_n.iter().map(|b| format!("{b:.4}")).collect::<Vec<_>>().join(", "),
            gaps[3]
        ),
    )
}

fn lmg() -> Outcome {
    let step = 0.02;
    let mut detail = Vec::new();
    let mut ok = true;
    for &g in &[0.0, 0.25, 0.5] {
        let mut best = (f64::NAN, -1.0);
        for i in 0..=100 {
            let h = step * i as f64;
            if let Ok(r) = LmgParams::new(g, h, 200).and_then(|p| lmg_phase(&p)) {
                let dev = (r.beta_g - PI).abs();
                if dev > best.1 {
                    best = (h, dev);
                }
            }
        }
        ok &= (best.0 - 1.0).abs() <= step + 1e-12;
        detail.push(format!("γ={g}: extreme at h={:.2}", best.0));
    }
    let sizes: Vec<usize> = (1..=10).map(|k| 50 * k).collect();
    for &g in &[0.0, 0.25, 0.5] {
        match lmg_size_scaling(g, 1.0 + 1e-6, &sizes) {
            Ok(fit) => {
                ok &= fit.r_squared > 0.99 && fit.slope < 0.0;
                detail.push(format!("γ={g}: slope {:.4}, R² {:.4}", fit.slope, fit.r_squared));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("γ={g}: {e}"));
            }
        }
    }
    Outcome::new(ok, detail.join("; "))
}

fn probe() -> Outcome {
    let model = ScalingModel::Probe { mu: 0.1, nu: 2.0, eta: 0.5, gamma: 1.0 };
    let rows = match peak_table(&model, &[13, 51, 251, 501]) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("peak search failed: {e}")),
    };
    let approach = rows.windows(2).all(|w| (w[1].lambda_m - 1.0).abs() < (w[0].lambda_m - 1.0).abs());
    let growing = rows.windows(2).all(|w| w[1].height > w[0].height);
    let mut worst: f64 = 0.0;
    for &mu in &[0.1, -1.5] {
        for i in 0..=60 {
            let l = 0.05 * i as f64;
            let closed = probe_phase_xx_limit(mu, 2.0, 0.5, l).map(|r| r.beta_g);
            let general = ProbeParams::new(mu, 2.0, 0.5, 0.0, l, SystemSize::Thermodynamic)
                .and_then(|p| probe_phase(&p))
                .map(|r| r.beta_g);
            match (closed, general) {
                (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
                _ => worst = f64::INFINITY,
            }
        }
    }
    let ok = approach && growing && worst < 1e-10;
    let peaks = rows.iter().map(|r| format!("N={} λm={:.5} h={:.4}", r.n, r.lambda_m, r.height)).collect::<Vec<_>>().join(", ");
    Outcome::new(ok, format!("{peaks}; closed form error {worst:.1e}"))
}

fn oracles() -> Outcome {
    let mut runner = common::runner(1);
    let angles: Vec<f64> =
        (0..100).map(|_| (-1.0f64..1.0).new_tree(&mut runner).expect("range strategy").current()).collect();
    let mut checks: Vec<OracleCheck> = Vec::new();
    let mut run = |r: qpt_geom::Result<Vec<OracleCheck>>| match r {
        Ok(c) => {
            checks.extend(c);
            true
        }
        Err(_) => false,
    };
    let mut ok = run(check_mode_loops(&angles, 10_000).map(|c| vec![c]));
    ok &= run(check_ed_berry_phase(1.0, 0.5, &[3, 5, 7, 9], 2000));
    ok &= run(check_ed_berry_phase(0.6, 1.4, &[3, 5, 7, 9], 2000));
    for &n in &[3, 5, 7] {
        ok &= run(check_fidelity(1.0, 0.7, 0.05, n).map(|c| vec![c]));
    }
    // even-sector dimensions 4, 16, 64, 256
    for &n in &[3, 5, 7, 9] {
        ok &= run(check_curvature(1.0, 0.5, 0.3, n).map(|c| vec![c]));
    }
    ok &= checks.iter().all(|c| c.passed);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let worst = checks.iter().map(|c| c.max_error / c.tolerance).fold(0.0, f64::max);
    Outcome::new(ok, format!("{} checks, worst error/tolerance {worst:.2e}, failed: {failed:?}", checks.len()))
}

fn invariants() -> Outcome {
    let mut failed = Vec::new();
    for (name, suite) in common::SUITES {
        if let Err(e) = suite(&mut common::runner(1000)) {
            failed.push(format!("{name}: {e}"));
        }
    }
    Outcome::new(failed.is_empty(), format!("{} suites × 1000 cases; failures: {failed:?}", common::SUITES.len()))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 kappa1 from peak heights", 60, kappa1),
        ("2 kappa2 from the thermodynamic limit", 10, kappa2),
        ("3 nu = |kappa2/kappa1|", 180, nu_ratio),
        ("4 pseudo-critical shift", 60, shift_exponent),
        ("5 XX class and dynamical exponents", 10, xx_class),
        ("6 Dicke limit and finite-N convergence", 30, dicke),
        ("7 LMG divergence at h = 1", 10, lmg),
        ("8 probe qubit", 30, probe),
        ("9 oracle equivalence", 120, oracles),
        ("10 invariant suites", 60, invariants),
    ];
    let mut failures = 0;
    for (name, budget, f) in criteria {
        let out = timed(Duration::from_secs(budget), f);
        println!("{} {name}: {}", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        if !out.passed {
            failures += 1;
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
