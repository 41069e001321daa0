//! Ground-state geometric phase of the periodic XY chain in a transverse field.
//!
//! The chain `H = -Σ [(1+γ)/2 σˣσˣ + (1-γ)/2 σʸσʸ + λ σᶻ]` with an odd number of
//! sites `N = 2M + 1` decouples into `M` two-level problems, one per momentum
//! pair `(k, -k)` with `φ_k = 2πk/N`. Each pair contributes the loop phase
//! `π (1 − cos θ_k)` when the spins are rotated once about `z`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{Method, ModelPoint, PhaseResult, SystemSize};
use crate::quad;

/// Absolute tolerance requested from the thermodynamic-limit quadratures.
const QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyParams {
    pub gamma: f64,
    pub lambda: f64,
    n_sites: usize,
}

impl XyParams {
    pub fn new(gamma: f64, lambda: f64, n_sites: usize) -> Result<Self> {
        if !gamma.is_finite() || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma and lambda must be finite (got {gamma}, {lambda})"
            )));
        }
        if n_sites < 3 || n_sites.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "n_sites must be odd and at least 3 (got {n_sites})"
            )));
        }
        Ok(Self { gamma, lambda, n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of momentum pairs, `M = (N − 1)/2`.
    pub fn modes(&self) -> usize {
        (self.n_sites - 1) / 2
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }
}

/// Bogoliubov data of one momentum pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAngle {
    pub k: usize,
    /// Momentum `φ_k = 2πk/N`.
    pub phi: f64,
    /// Excitation energy `Λ_k ≥ 0`.
    pub energy: f64,
    pub cos_theta: f64,
    /// `sin θ_k = γ sin φ_k / Λ_k`; fixes the sign of θ when γ < 0.
    pub sin_theta: f64,
    /// Set when `Λ_k = 0`; the angle then takes the γ → 0⁺ value θ = π/2.
    pub gapless: bool,
}

impl ModeAngle {
    pub fn theta(&self) -> f64 {
        self.sin_theta.atan2(self.cos_theta)
    }

    /// Per-mode loop phase `π (1 − cos θ_k)`.
    pub fn loop_phase(&self) -> f64 {
        PI * (1.0 - self.cos_theta)
    }
}

fn spectrum(gamma: f64, lambda: f64, phi: f64) -> (f64, f64, f64) {
    let (s, c) = phi.sin_cos();
    let energy = (lambda - c).hypot(gamma * s);
    (energy, c, s)
}

/// Mode angles for `k = 1..=M`, in ascending `k`.
pub fn mode_angles(params: &XyParams) -> Vec<ModeAngle> {
    let n = params.n_sites as f64;
    (1..=params.modes())
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n;
            let (energy, c, s) = spectrum(params.gamma, params.lambda, phi);
            if energy > 0.0 {
                ModeAngle {
                    k,
                    phi,
                    energy,
                    cos_theta: ((c - params.lambda) / energy).clamp(-1.0, 1.0),
                    sin_theta: (params.gamma * s / energy).clamp(-1.0, 1.0),
                    gapless: false,
                }
            } else {
                ModeAngle { k, phi, energy, cos_theta: 0.0, sin_theta: 1.0, gapless: true }
            }
        })
        .collect()
}

/// `β_g = (π/M) Σ_k (1 − cos θ_k)`; the unscaled sum is kept in `raw`.
pub fn ground_phase_finite(params: &XyParams) -> PhaseResult {
    let modes = mode_angles(params);
    let raw: f64 = modes.iter().map(ModeAngle::loop_phase).sum();
    PhaseResult {
        beta_g: raw / params.modes() as f64,
        raw: Some(raw),
        method: Method::FiniteSum,
        scaled: true,
        point: ModelPoint::Xy {
            gamma: params.gamma,
            lambda: params.lambda,
            size: SystemSize::Finite(params.n_sites),
        },
    }
}

/// Breakpoints for integrands over `φ ∈ [0, π]` that change rapidly where
/// `cos φ = λ` and, near `λ = ±1`, on the scale `|λ ∓ 1|` next to the ends.
pub(crate) fn breakpoints(gamma: f64, lambda: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    if lambda.abs() <= 1.0 {
        pts.push(lambda.acos());
    }
    let g = gamma.abs().max(1e-300);
    for (edge, dist) in [(0.0, (lambda - 1.0).abs()), (PI, (lambda + 1.0).abs())] {
        if dist < 0.5 {
            let mut scale = (dist / g).max(dist).max(1e-14);
            while scale < 1.0 {
                pts.push(if edge == 0.0 { scale } else { PI - scale });
                scale *= 4.0;
            }
        }
    }
    pts
}

/// `β_g = ∫₀^π (1 − cos θ_φ) dφ` by adaptive quadrature.
pub fn ground_phase_limit(gamma: f64, lambda: f64) -> Result<PhaseResult> {
    check_finite(gamma, lambda)?;
    let integrand = |phi: f64| {
        let (energy, c, _) = spectrum(gamma, lambda, phi);
        if energy > 0.0 {
            1.0 - ((c - lambda) / energy).clamp(-1.0, 1.0)
        } else {
            1.0
        }
    };
    let r = quad::integrate(integrand, 0.0, PI, &breakpoints(gamma, lambda), QUAD_TOL)?;
    Ok(PhaseResult {
        beta_g: r.value,
        raw: None,
        method: Method::Quadrature,
        scaled: true,
        point: ModelPoint::Xy { gamma, lambda, size: SystemSize::Thermodynamic },
    })
}

/// `dβ_g/dλ = (π/M) Σ_k γ² sin² φ_k / Λ_k³`.
pub fn phase_derivative_finite(params: &XyParams) -> Result<f64> {
    let g2 = params.gamma * params.gamma;
    let mut sum = 0.0;
    for m in mode_angles(params) {
        if m.gapless {
            return Err(Error::GaplessMode { k: m.k });
        }
        let s = m.phi.sin();
        sum += g2 * s * s / m.energy.powi(3);
    }
    Ok(PI * sum / params.modes() as f64)
}

/// `dβ_g/dλ` in the thermodynamic limit.
///
/// For γ = 0 the γ → 0⁺ limit is returned (derivative of [`xx_limit_phase`]).
/// At λ = 1 the derivative diverges logarithmically and `Error::Singular` is
/// returned.
pub fn phase_derivative_limit(gamma: f64, lambda: f64) -> Result<f64> {
    check_finite(gamma, lambda)?;
    if gamma == 0.0 {
        return xx_limit_derivative(lambda);
    }
    if lambda == 1.0 || lambda == -1.0 {
        return Err(Error::Singular(format!("dβ/dλ diverges at λ = {lambda} for γ = {gamma}")));
    }
    let g2 = gamma * gamma;
    let integrand = |phi: f64| {
        let (energy, _, s) = spectrum(gamma, lambda, phi);
        if energy > 0.0 {
            g2 * s * s / energy.powi(3)
        } else {
            0.0
        }
    };
    let r = quad::integrate(integrand, 0.0, PI, &breakpoints(gamma, lambda), QUAD_TOL)?;
    Ok(r.value)
}

/// γ → 0⁺ limit of the thermodynamic phase: `2π − 2 arccos λ` on
/// `|λ| ≤ 1`, `2π` above and `0` below.
pub fn xx_limit_phase(lambda: f64) -> PhaseResult {
    let beta_g = if lambda > 1.0 {
        2.0 * PI
    } else if lambda < -1.0 {
        0.0
    } else {
        2.0 * PI - 2.0 * lambda.acos()
    };
    PhaseResult {
        beta_g,
        raw: None,
        method: Method::ClosedForm,
        scaled: true,
        point: ModelPoint::Xy { gamma: 0.0, lambda, size: SystemSize::Thermodynamic },
    }
}

/// Derivative of [`xx_limit_phase`]: `2/√(1 − λ²)` inside the critical
/// segment, zero outside, singular at `|λ| = 1`.
pub fn xx_limit_derivative(lambda: f64) -> Result<f64> {
    if lambda.abs() == 1.0 {
        return Err(Error::Singular(format!("XX derivative diverges at λ = {lambda}")));
    }
    if lambda.abs() > 1.0 {
        Ok(0.0)
    } else {
        Ok(2.0 / (1.0 - lambda * lambda).sqrt())
    }
}

/// Excitation energy `Λ_φ` of the infinite chain.
pub fn dispersion(gamma: f64, lambda: f64, phi: f64) -> f64 {
    spectrum(gamma, lambda, phi).0
}

fn check_finite(gamma: f64, lambda: f64) -> Result<()> {
    if gamma.is_finite() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("non-finite input ({gamma}, {lambda})")))
    }
}
