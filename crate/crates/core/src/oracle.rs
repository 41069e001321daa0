//! Brute-force validators for the analytic results: discrete Berry phases of
//! the per-mode two-level states, exact diagonalization of short spin chains,
//! and a mean-field minimisation for the Dicke model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dicke::dicke_phase_limit;
use crate::error::{Error, Result};
use crate::geom_tensor::{berry_curvature_sum, diagonalize, fix_phase, qgt_numeric, HamiltonianFamily, ParamPoint, C64, FD_STEP};
use crate::phase::{circular_distance, wrap_phase};
use crate::xy_chain::{ground_phase_finite, mode_angles, phase_derivative_finite, XyParams};

/// Largest chain handled by dense diagonalization.
pub const MAX_ED_SITES: usize = 11;

/// Ordered normalized states around a closed loop; the last links back to
/// the first.
#[derive(Debug, Clone)]
pub struct WilsonLoop {
    pub states: Vec<DVector<C64>>,
}

impl WilsonLoop {
    /// `arg Π_j ⟨ψ_j|ψ_{j+1}⟩`, wrapped into `(−π, π]`.
    pub fn phase(&self) -> Result<f64> {
        let n = self.states.len();
        if n < 2 {
            return Err(Error::InsufficientData("a loop needs at least two states".into()));
        }
        let mut total = 0.0;
        for j in 0..n {
            let ov = self.states[j].dotc(&self.states[(j + 1) % n]);
            if ov.norm() < 1e-12 {
                return Err(Error::Singular(format!("vanishing overlap on link {j}")));
            }
            total += ov.arg();
        }
        Ok(wrap_phase(total))
    }
}

/// The per-mode ground state `cos(θ/2)|0⟩ − i e^{2iφ} sin(θ/2)|1⟩`.
pub fn mode_state(cos_theta: f64, phi: f64) -> DVector<C64> {
    let c = cos_theta.clamp(-1.0, 1.0);
    let half_cos = ((1.0 + c) / 2.0).sqrt();
    let half_sin = ((1.0 - c) / 2.0).sqrt();
    DVector::from_vec(vec![C64::new(half_cos, 0.0), C64::new(0.0, -1.0) * C64::from_polar(half_sin, 2.0 * phi)])
}

/// Discrete Berry phase of [`mode_state`] over `φ ∈ [0, π)`; the loop closes
/// because the state is π-periodic in φ.
pub fn per_mode_wilson_loop(cos_theta: f64, steps: usize) -> Result<f64> {
    if steps < 100 {
        return Err(Error::InvalidParameter(format!("Wilson loop needs ≥ 100 steps (got {steps})")));
    }
    if !cos_theta.is_finite() {
        return Err(Error::InvalidParameter("cos θ must be finite".into()));
    }
    let states = (0..steps).map(|j| mode_state(cos_theta, PI * j as f64 / steps as f64)).collect();
    WilsonLoop { states }.phase()
}

/// Ground state of the rotated chain `H_φ` restricted to an even number of
/// up spins, embedded in the full `2^N` space.
#[derive(Debug, Clone)]
pub struct EdGround {
    pub energy: f64,
    pub state: DVector<C64>,
}

fn check_ed_size(params: &XyParams) -> Result<()> {
    if params.n_sites() > MAX_ED_SITES {
        return Err(Error::TooLarge { n: params.n_sites() });
    }
    Ok(())
}

fn sector_basis(n: usize, parity: u32) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() % 2 == parity).collect()
}

/// Matrix of `H_φ = −Σ_j [(σ⁺_jσ⁻_{j+1} + h.c.) + γ(e^{2iφ}σ⁺_jσ⁺_{j+1} + h.c.) + λσᶻ_j]`
/// with periodic boundary on the given basis of bit strings (bit set = up).
fn sector_hamiltonian(params: &XyParams, phi: f64, basis: &[usize]) -> DMatrix<C64> {
    let n = params.n_sites();
    let index: std::collections::HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let pair_up = C64::from_polar(-params.gamma, 2.0 * phi);
    let mut h = DMatrix::zeros(basis.len(), basis.len());
    for (col, &s) in basis.iter().enumerate() {
        let ups = s.count_ones() as f64;
        h[(col, col)] += C64::new(-params.lambda * (2.0 * ups - n as f64), 0.0);
        for j in 0..n {
            let k = (j + 1) % n;
            let (bj, bk) = ((s >> j) & 1, (s >> k) & 1);
            let flipped = s ^ (1 << j) ^ (1 << k);
            let amp = match (bj, bk) {
                (0, 1) | (1, 0) => C64::new(-1.0, 0.0),
                (0, 0) => pair_up,
                _ => pair_up.conj(),
            };
            if let Some(&row) = index.get(&flipped) {
                h[(row, col)] += amp;
            }
        }
    }
    h
}

/// Dense Hamiltonian of the rotated chain on the full `2^N` space.
pub fn spin_chain_hamiltonian(params: &XyParams, phi: f64) -> Result<DMatrix<C64>> {
    check_ed_size(params)?;
    let basis: Vec<usize> = (0..1usize << params.n_sites()).collect();
    Ok(sector_hamiltonian(params, phi, &basis))
}

/// `∂H_φ/∂λ` and `∂H_φ/∂φ` on the even sector basis.
fn sector_gradients(params: &XyParams, phi: f64, basis: &[usize]) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = params.n_sites() as f64;
    let d_lambda = DMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        if r == c {
            C64::new(-(2.0 * basis[r].count_ones() as f64 - n), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // only the pairing terms depend on φ: d/dφ e^{±2iφ} = ±2i e^{±2iφ}
    let h = sector_hamiltonian(&XyParams::new(params.gamma, 0.0, params.n_sites()).expect("valid"), phi, basis);
    let d_phi = DMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        let gained = basis[r].count_ones() as i64 - basis[c].count_ones() as i64;
        match gained {
            2 => h[(r, c)] * C64::new(0.0, 2.0),
            -2 => h[(r, c)] * C64::new(0.0, -2.0),
            _ => C64::new(0.0, 0.0),
        }
    });
    (d_lambda, d_phi)
}

fn embed(basis: &[usize], dim: usize, v: DVector<C64>) -> DVector<C64> {
    let mut full = DVector::zeros(dim);
    for (i, &s) in basis.iter().enumerate() {
        full[s] = v[i];
    }
    full
}

/// Ground state of `H_φ` in the even-up-spin sector, phase-fixed so the
/// first component above `1e-8` is real and positive.
///
/// That sector holds the Bogoliubov vacuum of the chain; its energy is
/// `−2 Σ_k Λ_k + λ − 1`.
pub fn spin_chain_ed_ground(params: &XyParams, phi: f64) -> Result<EdGround> {
    check_ed_size(params)?;
    let basis = sector_basis(params.n_sites(), 0);
    let s = diagonalize(&sector_hamiltonian(params, phi, &basis))?;
    let mut v = s.ground();
    fix_phase(&mut v);
    Ok(EdGround { energy: s.energies[0], state: embed(&basis, 1 << params.n_sites(), v) })
}

/// Lowest energy over both parity sectors.
pub fn spin_chain_ground_energy(params: &XyParams, phi: f64) -> Result<f64> {
    check_ed_size(params)?;
    let mut best = f64::INFINITY;
    for parity in [0, 1] {
        let basis = sector_basis(params.n_sites(), parity);
        let ev = sector_hamiltonian(params, phi, &basis).symmetric_eigenvalues();
        best = best.min(ev.iter().copied().fold(f64::INFINITY, f64::min));
    }
    Ok(best)
}

/// Discrete Berry phase of the ED ground state as φ runs over `[0, π]`.
///
/// `H_φ = U_φ† H U_φ` with `U_φ = Π exp(−iφσᶻ/2)`, so the state at φ is
/// `U_φ†|ψ₀⟩`; the loop is closed with the ED ground state at φ = π. The
/// returned phase is the raw (unscaled) loop phase wrapped into `(−π, π]`.
pub fn discrete_berry_phase(params: &XyParams, phi_steps: usize) -> Result<f64> {
    if phi_steps < 100 {
        return Err(Error::InvalidParameter(format!("need ≥ 100 φ steps (got {phi_steps})")));
    }
    let n = params.n_sites();
    let psi0 = spin_chain_ed_ground(params, 0.0)?.state;
    let closing = spin_chain_ed_ground(params, PI)?.state;
    // U_φ† is diagonal: exp(iφ (n_up − n_down)/2)
    let rotate = |phi: f64| -> DVector<C64> {
        DVector::from_fn(psi0.len(), |s, _| {
            let sz = s.count_ones() as f64 - n as f64 / 2.0;
            psi0[s] * C64::from_polar(1.0, phi * sz)
        })
    };
    let dphi = PI / phi_steps as f64;
    let mut total = 0.0;
    let mut prev = psi0.clone();
    for j in 1..phi_steps {
        let next = rotate(dphi * j as f64);
        total += prev.dotc(&next).arg();
        prev = next;
    }
    for (from, to) in [(&prev, &closing), (&closing, &psi0)] {
        let ov = from.dotc(to);
        if ov.norm() < 1e-8 {
            return Err(Error::Singular("ground state at φ = π does not overlap the rotated loop".into()));
        }
        total += ov.arg();
    }
    Ok(wrap_phase(total))
}

/// Minimise `u − √(D² + L²u)` over `u ≥ 0`; returns `(L²/(2D), ⟨σx⟩)` with
/// `⟨σx⟩ = −D/√(D² + L²u*)`.
///
/// The objective is convex, so the minimum is found by bisecting its
/// increasing derivative.
pub fn dicke_meanfield_oracle(d: f64, l: f64) -> Result<(f64, f64)> {
    if !(d > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!("need D > 0 and finite L (got {d}, {l})")));
    }
    let l2 = l * l;
    let slope = |u: f64| 1.0 - l2 / (2.0 * (d * d + l2 * u).sqrt());
    let u = if slope(0.0) >= 0.0 {
        0.0
    } else {
        let (mut a, mut b) = (0.0, l2 / 4.0 + 1.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if slope(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    Ok((l2 / (2.0 * d), -d / (d * d + l2 * u).sqrt()))
}

/// Deliberate defects for checking that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Flip the sign of the analytic phase derivative.
    DerivativeSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleCheck {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_error, tolerance, passed: max_error.is_finite() && max_error <= tolerance }
    }
}

/// Per-mode loops against `π(1 − cos θ)` for the given angles.
pub fn check_mode_loops(cos_thetas: &[f64], steps: usize) -> Result<OracleCheck> {
    let mut worst: f64 = 0.0;
    for &c in cos_thetas {
        worst = worst.max(circular_distance(per_mode_wilson_loop(c, steps)?, PI * (1.0 - c)));
    }
    Ok(OracleCheck::new("per_mode_wilson_loop", worst, 1e-6))
}

/// ED loop phase against the raw analytic sum, one check per size with
/// tolerance `2π/N`.
pub fn check_ed_berry_phase(gamma: f64, lambda: f64, sizes: &[usize], phi_steps: usize) -> Result<Vec<OracleCheck>> {
    sizes
        .iter()
        .map(|&n| {
            let p = XyParams::new(gamma, lambda, n)?;
            let raw = ground_phase_finite(&p).raw.expect("finite sums carry the raw phase");
            let err = circular_distance(discrete_berry_phase(&p, phi_steps)?, raw);
            Ok(OracleCheck::new(&format!("ed_berry_phase_n{n}"), err, 2.0 * PI / n as f64))
        })
        .collect()
}

/// Mode-product fidelity against the overlap of ED ground states.
pub fn check_fidelity(gamma: f64, lambda: f64, dl: f64, n: usize) -> Result<OracleCheck> {
    let p1 = XyParams::new(gamma, lambda, n)?;
    let p2 = p1.with_lambda(lambda + dl);
    let exact = spin_chain_ed_ground(&p1, 0.0)?.state.dotc(&spin_chain_ed_ground(&p2, 0.0)?.state).norm();
    let product = crate::geom_tensor::xy_mode_fidelity(gamma, lambda, lambda + dl, n)?;
    Ok(OracleCheck::new("fidelity_mode_product", (exact - product).abs(), 1e-10))
}

/// Im Q from gauge-fixed differences of ED states against the spectral sum,
/// on the even sector of a short chain with coordinates (λ, φ).
pub fn check_curvature(gamma: f64, lambda: f64, phi: f64, n: usize) -> Result<OracleCheck> {
    let base = XyParams::new(gamma, lambda, n)?;
    check_ed_size(&base)?;
    let basis = sector_basis(n, 0);
    let family = HamiltonianFamily::new(|p: &ParamPoint| sector_hamiltonian(&base.with_lambda(p.0[0]), p.0[1], &basis));
    let eta = ParamPoint::new(vec![lambda, phi])?;
    let grad = |p: &ParamPoint, mu: usize| {
        let (dl, dp) = sector_gradients(&base.with_lambda(p.0[0]), p.0[1], &basis);
        if mu == 0 {
            dl
        } else {
            dp
        }
    };
    let v = berry_curvature_sum(&family, &eta, grad)?;
    let state = |p: &ParamPoint| {
        let s = diagonalize(&family.hamiltonian(p))?;
        Ok(s.ground())
    };
    let q = qgt_numeric(state, &eta, FD_STEP)?;
    q.check_invariants()?;
    let err = (v[(0, 1)] - q.q[(0, 1)].im).abs().max((v[(1, 0)] - q.q[(1, 0)].im).abs());
    Ok(OracleCheck::new("curvature_spectral_vs_numeric", err, 1e-5))
}

/// `Im Q_λφ` of the chain against its mode-sum value `½ Σ γ² sin²φ_k / Λ_k³`.
pub fn check_curvature_mode_sum(gamma: f64, lambda: f64, n: usize) -> Result<OracleCheck> {
    let base = XyParams::new(gamma, lambda, n)?;
    check_ed_size(&base)?;
    let basis = sector_basis(n, 0);
    let family = HamiltonianFamily::new(|p: &ParamPoint| sector_hamiltonian(&base.with_lambda(p.0[0]), p.0[1], &basis));
    let grad = |p: &ParamPoint, mu: usize| {
        let (dl, dp) = sector_gradients(&base.with_lambda(p.0[0]), p.0[1], &basis);
        if mu == 0 {
            dl
        } else {
            dp
        }
    };
    let v = berry_curvature_sum(&family, &ParamPoint::new(vec![lambda, 0.3])?, grad)?;
    // dβ_raw/dλ = ∫₀^π 2 Im Q_λφ dφ and Im Q_λφ does not depend on φ
    let modes = mode_angles(&base);
    let expect: f64 = modes.iter().map(|m| 0.5 * (gamma * m.phi.sin()).powi(2) / m.energy.powi(3)).sum();
    Ok(OracleCheck::new("curvature_mode_sum", (v[(0, 1)] - expect).abs(), 1e-8 * expect.abs().max(1.0)))
}

/// Analytic finite-N derivative against a central difference of the phase.
pub fn check_derivative(gamma: f64, lambda: f64, n: usize, fault: Option<Fault>) -> Result<OracleCheck> {
    let p = XyParams::new(gamma, lambda, n)?;
    let mut analytic = phase_derivative_finite(&p)?;
    if fault == Some(Fault::DerivativeSign) {
        analytic = -analytic;
    }
    let h = 1e-5;
    let fd = (ground_phase_finite(&p.with_lambda(lambda + h)).beta_g - ground_phase_finite(&p.with_lambda(lambda - h)).beta_g)
        / (2.0 * h);
    Ok(OracleCheck::new("derivative_vs_finite_difference", ((analytic - fd) / fd).abs(), 1e-5))
}

/// Mean-field Dicke minimum against the closed-form limit.
pub fn check_dicke_meanfield() -> Result<OracleCheck> {
    let mut worst: f64 = 0.0;
    for &(d, alpha) in &[(10.0f64, 0.5f64), (10.0, 2.0), (4.0, 1.5), (1.0, 3.0), (20.0, 8.0)] {
        let l = (2.0 * d * alpha).sqrt();
        let (a, sx) = dicke_meanfield_oracle(d, l)?;
        worst = worst.max((a - alpha).abs()).max((PI * (1.0 + sx) - dicke_phase_limit(alpha)).abs());
    }
    Ok(OracleCheck::new("dicke_meanfield_limit", worst, 1e-8))
}

/// The default battery of analytic-versus-oracle checks.
pub fn run_suite(fault: Option<Fault>) -> Result<Vec<OracleCheck>> {
    let angles: Vec<f64> = (0..100).map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / 100.0).collect();
    let mut checks = vec![check_mode_loops(&angles, 10_000)?];
    checks.extend(check_ed_berry_phase(1.0, 0.5, &[3, 5, 7, 9], 2000)?);
    checks.extend([
        check_fidelity(1.0, 0.7, 0.05, 7)?,
        check_curvature(1.0, 0.5, 0.3, 3)?,
        check_curvature_mode_sum(0.6, 0.8, 5)?,
        check_derivative(1.0, 0.9, 21, fault)?,
        check_dicke_meanfield()?,
    ]);
    Ok(checks)
}
