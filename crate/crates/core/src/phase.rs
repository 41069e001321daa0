use std::fmt;

use serde::{Deserialize, Serialize};

/// How a geometric phase was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FiniteSum,
    Quadrature,
    ClosedForm,
}

/// Number of sites, or the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemSize {
    Finite(usize),
    Thermodynamic,
}

impl fmt::Display for SystemSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSize::Finite(n) => write!(f, "{n}"),
            SystemSize::Thermodynamic => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for SystemSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(SystemSize::Thermodynamic);
        }
        s.parse::<usize>()
            .map(SystemSize::Finite)
            .map_err(|e| format!("bad system size {s:?}: {e}"))
    }
}

/// The model point a phase belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelPoint {
    Xy { gamma: f64, lambda: f64, size: SystemSize },
    Dicke { d: f64, alpha: f64, size: SystemSize },
    Lmg { gamma: f64, h: f64, n: usize },
    Probe { mu: f64, nu: f64, eta: f64, gamma: f64, lambda: f64, size: SystemSize },
}

/// A ground-state geometric phase together with how and where it was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub beta_g: f64,
    /// Unscaled per-mode sum `π Σ (1 − cos θ_k)` when the phase is a mode
    /// average; compare it mod 2π against loop phases.
    pub raw: Option<f64>,
    pub method: Method,
    /// True when `beta_g` carries the 1/M normalisation of a mode average.
    pub scaled: bool,
    pub point: ModelPoint,
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}
