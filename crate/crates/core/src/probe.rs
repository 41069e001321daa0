//! A test qubit coupled homogeneously to every site of an XY ring.
//!
//! Conditioned on the qubit state, the ring sees a field shifted by `±δ`
//! with `δ = η cos θ₀ / N`. The qubit's geometric phase depends on the ring
//! only through the mean `f = (1/N) Σ cos θ_k⁽ᵍ⁾`, whose nonanalyticity in λ
//! reports the ring's transition.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{Method, ModelPoint, PhaseResult, SystemSize};
use crate::quad;
use crate::xy_chain::{self, breakpoints};

const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeParams {
    pub mu: f64,
    pub nu: f64,
    pub eta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub size: SystemSize,
}

impl ProbeParams {
    pub fn new(mu: f64, nu: f64, eta: f64, gamma: f64, lambda: f64, size: SystemSize) -> Result<Self> {
        if ![mu, nu, eta, gamma, lambda].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("probe parameters must be finite".into()));
        }
        if mu == 0.0 && nu == 0.0 {
            return Err(Error::InvalidParameter("test qubit is degenerate for μ = ν = 0".into()));
        }
        if let SystemSize::Finite(n) = size {
            if n < 3 || n % 2 == 0 {
                return Err(Error::InvalidParameter(format!("ring size must be odd and at least 3 (got {n})")));
            }
        }
        Ok(Self { mu, nu, eta, gamma, lambda, size })
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }

    /// `θ₀ = atan2(ν, μ)`.
    pub fn theta0(&self) -> f64 {
        self.nu.atan2(self.mu)
    }

    /// `δ = η cos θ₀ / N`; zero in the thermodynamic limit.
    pub fn delta_shift(&self) -> f64 {
        match self.size {
            SystemSize::Finite(n) => self.eta * self.theta0().cos() / n as f64,
            SystemSize::Thermodynamic => 0.0,
        }
    }

    /// Half splitting of the bare test qubit, `√(μ² + ν²)/2`.
    pub fn gap_shift(&self) -> f64 {
        self.mu.hypot(self.nu) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    G,
    E,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::G => 1.0,
            Branch::E => -1.0,
        }
    }
}

/// Ring mode angles conditioned on one test-qubit branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchAngles {
    pub branch: Branch,
    /// `cos θ_k = ε_k / Λ_k` for `k = 1..=M`.
    pub cos_theta: Vec<f64>,
    pub energy: Vec<f64>,
}

/// Mode angles with `ε_k = λ − cos φ_k ± δ`.
pub fn branch_angles(gamma: f64, lambda: f64, n_sites: usize, delta_shift: f64, branch: Branch) -> BranchAngles {
    let m = (n_sites - 1) / 2;
    let shift = branch.sign() * delta_shift;
    let mut cos_theta = Vec::with_capacity(m);
    let mut energy = Vec::with_capacity(m);
    for k in 1..=m {
        let phi = 2.0 * PI * k as f64 / n_sites as f64;
        let (s, c) = phi.sin_cos();
        let eps = lambda - c + shift;
        let e = eps.hypot(gamma * s);
        cos_theta.push(if e > 0.0 { (eps / e).clamp(-1.0, 1.0) } else { 0.0 });
        energy.push(e);
    }
    BranchAngles { branch, cos_theta, energy }
}

/// `f = (1/N) Σ_k cos θ_k⁽ᵍ⁾`, or `(1/2π) ∫₀^π (λ − cos φ)/Λ_φ dφ` in the
/// thermodynamic limit.
pub fn f_function(lambda: f64, gamma: f64, size: SystemSize, delta_shift: f64) -> Result<f64> {
    if !(lambda.is_finite() && gamma.is_finite() && delta_shift.is_finite()) {
        return Err(Error::InvalidParameter("f needs finite inputs".into()));
    }
    match size {
        SystemSize::Finite(n) => {
            let a = branch_angles(gamma, lambda, n, delta_shift, Branch::G);
            Ok(a.cos_theta.iter().sum::<f64>() / n as f64)
        }
        SystemSize::Thermodynamic => {
            if gamma == 0.0 {
                return Ok(xx_f(lambda));
            }
            let integrand = |phi: f64| {
                let (s, c) = phi.sin_cos();
                let e = (lambda - c).hypot(gamma * s);
                if e > 0.0 {
                    (lambda - c) / e
                } else {
                    0.0
                }
            };
            let r = quad::integrate(integrand, 0.0, PI, &breakpoints(gamma, lambda), QUAD_TOL)?;
            Ok(r.value / (2.0 * PI))
        }
    }
}

/// `df/dλ`: `(1/N) Σ γ² sin² φ_k / Λ_k³` for finite rings.
pub fn f_derivative(lambda: f64, gamma: f64, size: SystemSize, delta_shift: f64) -> Result<f64> {
    match size {
        SystemSize::Finite(n) => {
            let a = branch_angles(gamma, lambda, n, delta_shift, Branch::G);
            let g2 = gamma * gamma;
            let mut sum = 0.0;
            for (i, &e) in a.energy.iter().enumerate() {
                if e == 0.0 {
                    return Err(Error::GaplessMode { k: i + 1 });
                }
                let s = (2.0 * PI * (i + 1) as f64 / n as f64).sin();
                sum += g2 * s * s / e.powi(3);
            }
            Ok(sum / n as f64)
        }
        SystemSize::Thermodynamic => Ok(xy_chain::phase_derivative_limit(gamma, lambda)? / (2.0 * PI)),
    }
}

/// XX value of the limit: `1/2 − arccos(λ)/π` for `|λ| ≤ 1`, `±1/2` outside.
fn xx_f(lambda: f64) -> f64 {
    if lambda > 1.0 {
        0.5
    } else if lambda < -1.0 {
        -0.5
    } else {
        0.5 - lambda.acos() / PI
    }
}

fn beta_from_f(mu: f64, nu: f64, eta: f64, f: f64) -> f64 {
    let a = mu + 4.0 * eta * f;
    PI * (1.0 + a / a.hypot(nu))
}

fn point(p: &ProbeParams) -> ModelPoint {
    ModelPoint::Probe { mu: p.mu, nu: p.nu, eta: p.eta, gamma: p.gamma, lambda: p.lambda, size: p.size }
}

/// `β_g = π[1 + (μ + 4ηf)/√((μ + 4ηf)² + ν²)]`.
pub fn probe_phase(params: &ProbeParams) -> Result<PhaseResult> {
    let f = f_function(params.lambda, params.gamma, params.size, params.delta_shift())?;
    let method = match params.size {
        SystemSize::Finite(_) => Method::FiniteSum,
        SystemSize::Thermodynamic if params.gamma == 0.0 => Method::ClosedForm,
        SystemSize::Thermodynamic => Method::Quadrature,
    };
    Ok(PhaseResult {
        beta_g: beta_from_f(params.mu, params.nu, params.eta, f),
        raw: None,
        method,
        scaled: false,
        point: point(params),
    })
}

/// Closed form for an XX ring (γ → 0⁺) of infinite size.
pub fn probe_phase_xx_limit(mu: f64, nu: f64, eta: f64, lambda: f64) -> Result<PhaseResult> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("closed form needs λ ≥ 0 (got {lambda})")));
    }
    let params = ProbeParams::new(mu, nu, eta, 0.0, lambda, SystemSize::Thermodynamic)?;
    let beta_g = if lambda > 1.0 {
        let a = mu + 2.0 * eta;
        PI * (1.0 + a / a.hypot(nu))
    } else {
        let a = mu + 2.0 * eta - 4.0 * eta * lambda.acos() / PI;
        PI * (1.0 + a / a.hypot(nu))
    };
    Ok(PhaseResult { beta_g, raw: None, method: Method::ClosedForm, scaled: false, point: point(&params) })
}

/// `dβ_g/dλ = π ν² · 4η f′ / ((μ + 4ηf)² + ν²)^{3/2}`.
pub fn probe_derivative(params: &ProbeParams) -> Result<f64> {
    let delta = params.delta_shift();
    let f = f_function(params.lambda, params.gamma, params.size, delta)?;
    let df = f_derivative(params.lambda, params.gamma, params.size, delta)?;
    let a = params.mu + 4.0 * params.eta * f;
    let nu2 = params.nu * params.nu;
    Ok(PI * nu2 * 4.0 * params.eta * df / (a * a + nu2).powf(1.5))
}
