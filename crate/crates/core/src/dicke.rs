//! Born–Oppenheimer geometric phase of the Dicke model.
//!
//! The qubits follow the effective field `B = (D, Lq/√N·…)` adiabatically, which
//! leaves a one-dimensional Schrödinger problem for the oscillator coordinate
//! `q` in the potential `(ω/2)(q² − N √(D² + L²q²/N))`. The phase follows from
//! the mean qubit polarisation along the static field component `D`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{Method, ModelPoint, PhaseResult, SystemSize};

/// Amplitude allowed at the outer grid edge.
const EDGE_AMPLITUDE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams {
    pub omega: f64,
    pub delta_atom: f64,
    pub coupling: f64,
    pub n_qubits: usize,
}

impl DickeParams {
    pub fn new(omega: f64, delta_atom: f64, coupling: f64, n_qubits: usize) -> Result<Self> {
        let ok = omega.is_finite() && omega > 0.0 && delta_atom.is_finite() && delta_atom > 0.0;
        if !ok || !coupling.is_finite() || coupling < 0.0 || n_qubits == 0 {
            return Err(Error::InvalidParameter(format!(
                "need ω > 0, Δ > 0, λ ≥ 0, N ≥ 1 (got {omega}, {delta_atom}, {coupling}, {n_qubits})"
            )));
        }
        Ok(Self { omega, delta_atom, coupling, n_qubits })
    }

    /// Parameters with ω = 1 from the dimensionless pair `(D, α)`.
    pub fn from_dimensionless(d: f64, alpha: f64, n_qubits: usize) -> Result<Self> {
        if !(d.is_finite() && d > 0.0 && alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("need D > 0, α ≥ 0 (got {d}, {alpha})")));
        }
        let l = (2.0 * d * alpha).sqrt();
        Self::new(1.0, d / 2.0, l / (2.0 * 2f64.sqrt()), n_qubits)
    }

    /// Critical coupling `√(ωΔ/2)`.
    pub fn lambda_c(&self) -> f64 {
        (self.omega * self.delta_atom / 2.0).sqrt()
    }

    /// `D = 2Δ/ω`.
    pub fn d(&self) -> f64 {
        2.0 * self.delta_atom / self.omega
    }

    /// `L = 2√2 λ/ω`.
    pub fn l(&self) -> f64 {
        2.0 * 2f64.sqrt() * self.coupling / self.omega
    }

    /// `α = (λ/λ_c)²`, identical to `L²/(2D)`.
    pub fn alpha(&self) -> f64 {
        (self.coupling / self.lambda_c()).powi(2)
    }

    /// Position of the right-hand potential minimum, zero in the normal phase.
    pub fn displaced_minimum(&self) -> f64 {
        let (d, l, n) = (self.d(), self.l(), self.n_qubits as f64);
        if l == 0.0 {
            return 0.0;
        }
        let q2 = n * (l.powi(4) / 4.0 - d * d) / (l * l);
        q2.max(0.0).sqrt()
    }
}

/// Uniform q-grid. `q_max = None` starts from the box `max(8, 2 q_min + 8)`
/// around the displaced minima and doubles it (up to four times) while the
/// edge amplitude is too large, which matters near α = 1 where the potential
/// turns quartic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub q_max: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { points: 4000, q_max: None }
    }
}

impl GridSpec {
    pub fn with_points(points: usize) -> Self {
        Self { points, q_max: None }
    }

    fn resolve(&self, params: &DickeParams) -> Result<(usize, f64)> {
        if self.points < 2000 {
            return Err(Error::InvalidParameter(format!("grid needs ≥ 2000 points (got {})", self.points)));
        }
        let q_max = self.q_max.unwrap_or_else(|| (2.0 * params.displaced_minimum() + 8.0).max(8.0));
        if !(q_max.is_finite() && q_max > 0.0) {
            return Err(Error::InvalidParameter(format!("bad q_max {q_max}")));
        }
        Ok((self.points / 2, q_max))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorGroundState {
    /// Symmetric grid `q_i = −q_max + (i + ½)Δq`; zero is not a grid point.
    pub grid: Vec<f64>,
    /// Real ground-state amplitudes, `Σ φ_i² Δq = 1`.
    pub amplitudes: Vec<f64>,
    pub spacing: f64,
    /// Lowest eigenvalue `ε₀`.
    pub energy: f64,
}

impl OscillatorGroundState {
    /// `Σ φ_i² g(q_i) Δq`.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .iter()
            .zip(&self.amplitudes)
            .map(|(&q, &a)| a * a * g(q))
            .sum::<f64>()
            * self.spacing
    }

    pub fn norm(&self) -> f64 {
        self.expectation(|_| 1.0)
    }
}

/// `(ω/2)(q² − N √(D² + L²q²/N))`.
pub fn adiabatic_potential(q: f64, params: &DickeParams) -> f64 {
    let (d, l, n) = (params.d(), params.l(), params.n_qubits as f64);
    0.5 * params.omega * (q * q - n * (d * d + l * l * q * q / n).sqrt())
}

/// Lowest eigenpair of `(ω/2)(−d²/dq² + q² − N√(D² + L²q²/N))` by second-order
/// finite differences.
///
/// The ground state is even, so the problem is solved on `q > 0` with a
/// reflecting condition at the origin and mirrored.
pub fn solve_ground_oscillator(params: &DickeParams, grid: &GridSpec) -> Result<OscillatorGroundState> {
    let (half, q_max) = grid.resolve(params)?;
    let widen = if grid.q_max.is_none() { 4 } else { 0 };
    let mut last = Error::GridTooSmall { amplitude: f64::NAN };
    for k in 0..=widen {
        match solve_on_box(params, half, q_max * f64::powi(2.0, k)) {
            Err(e @ Error::GridTooSmall { .. }) => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn solve_on_box(params: &DickeParams, half: usize, q_max: f64) -> Result<OscillatorGroundState> {
    let h = q_max / half as f64;
    let w = 0.5 * params.omega;
    let kin = w / (h * h);

    let q_half: Vec<f64> = (0..half).map(|i| (i as f64 + 0.5) * h).collect();
    let mut diag: Vec<f64> = q_half.iter().map(|&q| 2.0 * kin + adiabatic_potential(q, params)).collect();
    diag[0] -= kin;
    let off = -kin;

    let energy = lowest_eigenvalue(&diag, off);
    let vector = inverse_iteration(&diag, off, energy);

    let scale = (2.0 * h * vector.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let sign = if vector[0] < 0.0 { -1.0 } else { 1.0 };
    let amp_half: Vec<f64> = vector.iter().map(|v| sign * v / scale).collect();

    let edge = amp_half[half - 1].abs();
    if edge > EDGE_AMPLITUDE {
        return Err(Error::GridTooSmall { amplitude: edge });
    }

    let grid_pts = q_half.iter().rev().map(|q| -q).chain(q_half.iter().copied()).collect();
    let amplitudes = amp_half.iter().rev().chain(amp_half.iter()).copied().collect();
    Ok(OscillatorGroundState { grid: grid_pts, amplitudes, spacing: h, energy })
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        d = if i == 0 { a - x } else { a - x - off * off / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + off.abs()).max(1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest_eigenvalue(diag: &[f64], off: f64) -> f64 {
    let r = 2.0 * off.abs();
    let mut lo = diag.iter().fold(f64::INFINITY, |m, &a| m.min(a - r));
    let mut hi = diag.iter().fold(f64::NEG_INFINITY, |m, &a| m.max(a + r));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn inverse_iteration(diag: &[f64], off: f64, eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = eigenvalue - 1e-9 * eigenvalue.abs().max(1.0);
    let mut v = vec![1.0; n];
    let mut c = vec![0.0; n];
    let mut y = vec![0.0; n];
    for _ in 0..4 {
        // Thomas algorithm for (A − shift) y = v
        let mut denom = diag[0] - shift;
        c[0] = off / denom;
        y[0] = v[0] / denom;
        for i in 1..n {
            denom = diag[i] - shift - off * c[i - 1];
            c[i] = off / denom;
            y[i] = (v[i] - off * y[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = yi / norm;
        }
    }
    v
}

/// `⟨Jx⟩ = −N ∫ |φ(q)|² D/√(D² + L²q²/N) dq`.
pub fn jx_mean(params: &DickeParams, state: &OscillatorGroundState) -> f64 {
    let (d, l, n) = (params.d(), params.l(), params.n_qubits as f64);
    -n * state.expectation(|q| d / (d * d + l * l * q * q / n).sqrt())
}

/// `β_g = Nπ(1 + ⟨Jx⟩/N)` from the adiabatic ground state.
pub fn dicke_phase_finite(params: &DickeParams, grid: &GridSpec) -> Result<PhaseResult> {
    let state = solve_ground_oscillator(params, grid)?;
    let n = params.n_qubits as f64;
    let jx = jx_mean(params, &state);
    Ok(PhaseResult {
        beta_g: n * PI * (1.0 + jx / n),
        raw: None,
        method: Method::FiniteSum,
        scaled: false,
        point: ModelPoint::Dicke { d: params.d(), alpha: params.alpha(), size: SystemSize::Finite(params.n_qubits) },
    })
}

/// Thermodynamic limit of `β_g/N`: 0 for α ≤ 1, `π(1 − 1/α)` above.
pub fn dicke_phase_limit(alpha: f64) -> f64 {
    if alpha <= 1.0 {
        0.0
    } else {
        PI * (1.0 - 1.0 / alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-12 * (1.0 + b.abs()) {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn alpha_identity() {
        let p = DickeParams::new(1.3, 0.7, 0.9, 10).unwrap();
        assert!((p.alpha() - p.l().powi(2) / (2.0 * p.d())).abs() < 1e-14);
        let q = DickeParams::from_dimensionless(10.0, 2.0, 16).unwrap();
        assert!((q.alpha() - 2.0).abs() < 1e-14);
        assert!((q.d() - 10.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DickeParams::new(0.0, 1.0, 1.0, 4).is_err());
        assert!(DickeParams::new(1.0, 1.0, -1.0, 4).is_err());
        assert!(DickeParams::new(1.0, 1.0, 1.0, 0).is_err());
        let p = DickeParams::from_dimensionless(10.0, 0.5, 8).unwrap();
        assert!(solve_ground_oscillator(&p, &GridSpec::with_points(100)).is_err());
    }

    #[test]
    fn potential_at_origin_and_symmetry() {
        let p = DickeParams::from_dimensionless(10.0, 2.0, 16).unwrap();
        assert!((adiabatic_potential(0.0, &p) + 0.5 * 16.0 * 10.0).abs() < 1e-12);
        assert_eq!(adiabatic_potential(3.3, &p), adiabatic_potential(-3.3, &p));
    }

    #[test]
    fn potential_minima_follow_stationarity() {
        for &alpha in &[1.5, 2.0, 4.0] {
            let p = DickeParams::from_dimensionless(10.0, alpha, 32).unwrap();
            let q = golden_min(|q| adiabatic_potential(q, &p), 0.0, 200.0);
            let expected = p.displaced_minimum();
            assert!(((q - expected) / expected).abs() < 1e-6, "α={alpha}: {q} vs {expected}");
        }
        let p = DickeParams::from_dimensionless(10.0, 0.5, 32).unwrap();
        assert!(golden_min(|q| adiabatic_potential(q, &p), 0.0, 50.0).abs() < 1e-5);
    }

    #[test]
    fn decoupled_limit_is_harmonic() {
        let p = DickeParams::new(1.0, 5.0, 0.0, 8).unwrap();
        let s = solve_ground_oscillator(&p, &GridSpec::default()).unwrap();
        assert!((s.energy - (0.5 - 0.5 * 8.0 * 10.0)).abs() < 1e-5, "{}", s.energy);
        assert!((s.norm() - 1.0).abs() < 1e-10);
        let gauss0 = PI.powf(-0.25);
        let mid = s.amplitudes.len() / 2;
        assert!((s.amplitudes[mid] - gauss0).abs() < 1e-4);
    }

    #[test]
    fn normal_phase_polarisation() {
        let p = DickeParams::from_dimensionless(10.0, 0.5, 32).unwrap();
        let s = solve_ground_oscillator(&p, &GridSpec::default()).unwrap();
        assert!((jx_mean(&p, &s) / 32.0 + 1.0).abs() < 0.05);
        assert!(s.amplitudes[0].abs() < 1e-8 && s.amplitudes.last().unwrap().abs() < 1e-8);
    }

    #[test]
    fn grid_refinement_is_converged() {
        let p = DickeParams::from_dimensionless(10.0, 0.5, 32).unwrap();
        let a = solve_ground_oscillator(&p, &GridSpec::with_points(4000)).unwrap();
        let b = solve_ground_oscillator(&p, &GridSpec::with_points(8000)).unwrap();
        assert!((a.energy - b.energy).abs() < 1e-6, "{} {}", a.energy, b.energy);
    }

    #[test]
    fn grid_too_small_is_reported() {
        let p = DickeParams::from_dimensionless(10.0, 2.0, 32).unwrap();
        let g = GridSpec { points: 2000, q_max: Some(10.0) };
        assert!(matches!(solve_ground_oscillator(&p, &g), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn reflection_symmetric_state() {
        let p = DickeParams::from_dimensionless(10.0, 2.0, 16).unwrap();
        let s = solve_ground_oscillator(&p, &GridSpec::default()).unwrap();
        let n = s.amplitudes.len();
        for i in 0..n / 2 {
            assert_eq!(s.amplitudes[i], s.amplitudes[n - 1 - i]);
            assert_eq!(s.grid[i], -s.grid[n - 1 - i]);
        }
    }

    #[test]
    fn phase_limits() {
        assert_eq!(dicke_phase_limit(0.5), 0.0);
        assert_eq!(dicke_phase_limit(1.0), 0.0);
        assert!((dicke_phase_limit(2.0) - PI / 2.0).abs() < 1e-15);
        let tiny = DickeParams::from_dimensionless(10.0, 1e-6, 8).unwrap();
        assert!(dicke_phase_finite(&tiny, &GridSpec::default()).unwrap().beta_g < 1e-5);
    }

    #[test]
    fn finite_n_converges_to_limit_at_alpha_two() {
        let mut last = f64::INFINITY;
        for &n in &[8usize, 16, 32, 64] {
            let p = DickeParams::from_dimensionless(10.0, 2.0, n).unwrap();
            let b = dicke_phase_finite(&p, &GridSpec::default()).unwrap().beta_g / n as f64;
            let gap = (b - PI / 2.0).abs();
            assert!(gap < last, "N={n}: gap {gap} did not shrink from {last}");
            last = gap;
        }
        assert!(last < 0.1);
    }
}
