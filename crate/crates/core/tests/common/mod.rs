//! Randomized invariant suites shared by the acceptance run and the regular
//! property tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use qpt_geom::dicke::dicke_phase_limit;
use qpt_geom::geom_tensor::{qgt_spectral, HamiltonianFamily, ParamPoint, C64};
use qpt_geom::lmg::{double_factorial_ratios, lmg_phase, LmgParams};
use qpt_geom::oracle::per_mode_wilson_loop;
use qpt_geom::phase::circular_distance;
use qpt_geom::probe::{probe_phase, probe_phase_xx_limit, ProbeParams};
use qpt_geom::quad::integrate;
use qpt_geom::scaling::{fit_linear, FitKind};
use qpt_geom::sweep::parse_range;
use qpt_geom::xy_chain::{ground_phase_finite, phase_derivative_finite, XyParams};
use qpt_geom::{Error, SystemSize};

pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn odd_size() -> impl Strategy<Value = usize> {
    (1usize..100).prop_map(|k| 2 * k + 1)
}

fn xy_bounds_and_parity(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-2.0f64..2.0, -3.0f64..3.0, odd_size()), |(g, l, n)| {
        let p = XyParams::new(g, l, n).map_err(fail)?;
        let b = ground_phase_finite(&p).beta_g;
        prop_assert!((0.0..=2.0 * PI).contains(&b), "β = {b}");
        let mirrored = ground_phase_finite(&XyParams::new(-g, l, n).map_err(fail)?).beta_g;
        prop_assert_eq!(b, mirrored);
        match phase_derivative_finite(&p) {
            Ok(d) => prop_assert!(d >= 0.0, "dβ/dλ = {d}"),
            Err(Error::GaplessMode { .. }) => {}
            Err(e) => return Err(fail(e)),
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn dicke_limit_monotone(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(0.0f64..20.0, 0.0f64..5.0), |(a, da)| {
        let (lo, hi) = (dicke_phase_limit(a), dicke_phase_limit(a + da));
        prop_assert!((0.0..PI).contains(&lo));
        prop_assert!(hi >= lo);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn lmg_bounded_by_pi(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(0.0f64..0.99, 0.0f64..6.0, 2usize..400), |(g, h, n)| {
        let p = LmgParams::new(g, h, n).map_err(fail)?;
        match lmg_phase(&p) {
            Ok(res) => prop_assert!(res.beta_g <= PI + 1e-12 && res.beta_g.is_finite(), "β = {}", res.beta_g),
            Err(Error::Singular(_)) | Err(Error::Overflow) => {}
            Err(e) => return Err(fail(e)),
        }
        let ratios = double_factorial_ratios(n / 2);
        prop_assert!(ratios.windows(2).all(|w| w[1] <= w[0] && w[1] > 0.0));
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn probe_bounds(r: &mut TestRunner) -> Result<(), String> {
    let size = prop_oneof![odd_size().prop_map(SystemSize::Finite), Just(SystemSize::Thermodynamic)];
    r.run(&(-2.0f64..2.0, 0.1f64..3.0, -1.0f64..1.0, 0.05f64..1.5, 0.0f64..2.5, size), |(mu, nu, eta, g, l, s)| {
        let p = ProbeParams::new(mu, nu, eta, g, l, s).map_err(fail)?;
        match probe_phase(&p) {
            Ok(res) => prop_assert!((0.0..=2.0 * PI).contains(&res.beta_g), "β = {}", res.beta_g),
            Err(Error::GaplessMode { .. }) | Err(Error::Singular(_)) => {}
            Err(e) => return Err(fail(e)),
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn probe_closed_form(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-2.0f64..2.0, 0.1f64..3.0, -1.0f64..1.0, 0.0f64..3.0), |(mu, nu, eta, l)| {
        let closed = probe_phase_xx_limit(mu, nu, eta, l).map_err(fail)?.beta_g;
        let p = ProbeParams::new(mu, nu, eta, 0.0, l, SystemSize::Thermodynamic).map_err(fail)?;
        let general = probe_phase(&p).map_err(fail)?.beta_g;
        prop_assert!((closed - general).abs() < 1e-10, "{closed} vs {general}");
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn fit_recovers_lines(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-5.0f64..5.0, -5.0f64..5.0, 4usize..30, any::<u64>()), |(a, b, m, seed)| {
        let mut pts: Vec<(f64, f64)> = (0..m).map(|i| (i as f64 * 0.7 + 1.0, a * (i as f64 * 0.7 + 1.0) + b)).collect();
        // a cheap deterministic shuffle; the fit must not depend on order
        let len = pts.len();
        pts.rotate_left((seed as usize) % len);
        let fit = fit_linear(&pts, FitKind::Linear).map_err(fail)?;
        prop_assert!((fit.slope - a).abs() < 1e-9 && (fit.intercept - b).abs() < 1e-8);
        prop_assert!(a.abs() < 1e-6 || fit.r_squared > 1.0 - 1e-12);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn qubit_tensor_invariants(r: &mut TestRunner) -> Result<(), String> {
    let c = |re: f64, im: f64| C64::new(re, im);
    r.run(&(-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0), |(x, y, z)| {
        let fam = HamiltonianFamily::new(move |p: &ParamPoint| {
            let (a, b) = (p.0[0], p.0[1]);
            DMatrix::from_row_slice(2, 2, &[c(z, 0.0), c(a, -b), c(a, b), c(-z, 0.0)])
        });
        let grad = move |_: &ParamPoint, mu: usize| {
            if mu == 0 {
                DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            } else {
                DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            }
        };
        let q = qgt_spectral(&fam, &ParamPoint(vec![x, y]), grad).map_err(fail)?;
        q.check_invariants().map_err(fail)?;
        let g = q.metric();
        let v = q.curvature();
        prop_assert!((v[(0, 1)] + v[(1, 0)]).abs() < 1e-12);
        // a pure-state tensor satisfies det g ≥ (Im Q)²
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        prop_assert!(det + 1e-9 * g[(0, 0)].max(1.0).powi(2) >= v[(0, 1)].powi(2));
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn quadrature_is_exact_on_cubics(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-3.0f64..3.0, 0.01f64..4.0, prop::array::uniform4(-2.0f64..2.0)), |(a, w, k)| {
        let b = a + w;
        let f = |x: f64| k[0] + x * (k[1] + x * (k[2] + x * k[3]));
        let prim = |x: f64| x * (k[0] + x * (k[1] / 2.0 + x * (k[2] / 3.0 + x * k[3] / 4.0)));
        let got = integrate(f, a, b, &[a + w / 3.0], 1e-12).map_err(fail)?.value;
        let want = prim(b) - prim(a);
        prop_assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{got} vs {want}");
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn ranges_hit_endpoints(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-10.0f64..10.0, 0.0f64..10.0, 2usize..500), |(a, w, steps)| {
        let b = a + w;
        let v = parse_range(&format!("{a}:{b}:{steps}")).map_err(fail)?;
        prop_assert_eq!(v.len(), steps);
        prop_assert_eq!(v[0], a);
        prop_assert_eq!(v[steps - 1], b);
        prop_assert!(v.windows(2).all(|p| p[1] >= p[0]));
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn wilson_loops_converge(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(-1.0f64..1.0), |c| {
        let phase = per_mode_wilson_loop(c, 2000).map_err(fail)?;
        prop_assert!(circular_distance(phase, PI * (1.0 - c)) < 1e-5);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

/// Every invariant suite, by name.
pub const SUITES: &[(&str, Suite)] = &[
    ("xy_bounds_and_parity", xy_bounds_and_parity),
    ("dicke_limit_monotone", dicke_limit_monotone),
    ("lmg_bounded_by_pi", lmg_bounded_by_pi),
    ("probe_bounds", probe_bounds),
    ("probe_closed_form", probe_closed_form),
    ("fit_recovers_lines", fit_recovers_lines),
    ("qubit_tensor_invariants", qubit_tensor_invariants),
    ("quadrature_is_exact_on_cubics", quadrature_is_exact_on_cubics),
    ("ranges_hit_endpoints", ranges_hit_endpoints),
    ("wilson_loops_converge", wilson_loops_converge),
];

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}
