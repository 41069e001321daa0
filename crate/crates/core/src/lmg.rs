//! Geometric phase of the Lipkin–Meshkov–Glick ground state after a
//! Holstein–Primakoff expansion about the semiclassical magnetisation and a
//! Bogoliubov rotation of the resulting boson.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{Method, ModelPoint, PhaseResult};
use crate::scaling::{fit_linear, FitKind, ScalingFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    pub gamma: f64,
    pub h: f64,
    pub n_spins: usize,
}

impl LmgParams {
    pub fn new(gamma: f64, h: f64, n_spins: usize) -> Result<Self> {
        if !(gamma.is_finite() && (0.0..1.0).contains(&gamma)) {
            return Err(Error::InvalidParameter(format!("anisotropy must lie in [0, 1) (got {gamma})")));
        }
        if !(h.is_finite() && h >= 0.0) {
            return Err(Error::InvalidParameter(format!("field must be finite and ≥ 0 (got {h})")));
        }
        if n_spins < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 spins (got {n_spins})")));
        }
        Ok(Self { gamma, h, n_spins })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovParams {
    pub theta_sc: f64,
    pub delta_b: f64,
    pub gamma_b: f64,
    /// `tanh 2x = 2Γ/Δ`.
    pub tanh2x: f64,
    /// `t = tanh² x`.
    pub t: f64,
}

/// Polar angle of the classical magnetisation: `arccos h` below the
/// transition, zero (field-polarised) above it.
pub fn semiclassical_angle(h: f64) -> f64 {
    h.min(1.0).acos()
}

pub fn bogoliubov_params(params: &LmgParams) -> Result<BogoliubovParams> {
    if params.h == 1.0 {
        return Err(Error::Singular("LMG Bogoliubov angle diverges at h = 1".into()));
    }
    let theta = semiclassical_angle(params.h);
    let (s, c) = theta.sin_cos();
    let delta_b = s * s - (params.gamma + c * c) / 2.0 + params.h * c;
    let gamma_b = (params.gamma - c * c) / 4.0;
    let tanh2x = 2.0 * gamma_b / delta_b;
    if !(tanh2x.abs() < 1.0) {
        return Err(Error::Singular(format!("|tanh 2x| = {} ≥ 1", tanh2x.abs())));
    }
    // tanh x = (1 − √(1 − e²))/e, written without the cancellation at small e
    let tanh_x = tanh2x / (1.0 + (1.0 - tanh2x * tanh2x).sqrt());
    Ok(BogoliubovParams { theta_sc: theta, delta_b, gamma_b, tanh2x, t: tanh_x * tanh_x })
}

/// Weights `c_n = (2n−1)!!/(2n)!!` for `n = 0..=n_max`.
pub fn double_factorial_ratios(n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(1.0);
    for n in 1..=n_max {
        let prev = c[n - 1];
        c.push(prev * (2 * n - 1) as f64 / (2 * n) as f64);
    }
    c
}

/// `β_g = π[1 − Σ 2n c_n t^{n−1} / Σ c_n t^{n−1}]` with both sums over
/// `n = 0..=⌊N/2⌋`. The value is not reduced mod 2π.
pub fn lmg_phase(params: &LmgParams) -> Result<PhaseResult> {
    let bp = bogoliubov_params(params)?;
    let point = ModelPoint::Lmg { gamma: params.gamma, h: params.h, n: params.n_spins };
    let t = bp.t;
    if t >= 1.0 {
        return Err(Error::Overflow);
    }
    if t == 0.0 {
        return Ok(PhaseResult { beta_g: PI, raw: None, method: Method::ClosedForm, scaled: false, point });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut power = 1.0 / t;
    for (n, c) in double_factorial_ratios(params.n_spins / 2).into_iter().enumerate() {
        num += 2.0 * n as f64 * c * power;
        den += c * power;
        power *= t;
    }
    if !(num.is_finite() && den.is_finite()) {
        return Err(Error::Overflow);
    }
    Ok(PhaseResult { beta_g: PI * (1.0 - num / den), raw: None, method: Method::FiniteSum, scaled: false, point })
}

/// Linear fit of `β_g(N)` against `N` at a field close to the transition.
pub fn lmg_size_scaling(gamma: f64, h: f64, sizes: &[usize]) -> Result<ScalingFit> {
    if sizes.len() < 4 {
        return Err(Error::InsufficientData(format!("need ≥ 4 sizes, got {}", sizes.len())));
    }
    let points = sizes
        .iter()
        .map(|&n| Ok((n as f64, lmg_phase(&LmgParams::new(gamma, h, n)?)?.beta_g)))
        .collect::<Result<Vec<_>>>()?;
    fit_linear(&points, FitKind::Linear)
}
