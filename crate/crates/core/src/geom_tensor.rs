//! Berry curvature, quantum geometric tensor and ground-state fidelity over a
//! parameter manifold, for Hamiltonians on a finite-dimensional space.
//!
//! Orientation: for the spin-½ state `(cos θ/2, e^{iφ} sin θ/2)` both the
//! spectral sum and the numerical tensor give `Im Q_θφ = +sin θ / 4`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::xy_chain::{mode_angles, XyParams};

pub type C64 = Complex64;

/// Gaps below this are treated as level crossings.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Allowed change of Q when the step is halved.
pub const RICHARDSON_TOL: f64 = 1e-6;

/// Coordinates on the parameter manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint(pub Vec<f64>);

impl ParamPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("parameter point has non-finite entries".into()));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn shifted(&self, mu: usize, h: f64) -> Self {
        let mut c = self.0.clone();
        c[mu] += h;
        Self(c)
    }
}

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn ground(&self) -> DVector<C64> {
        self.vectors.column(0).into_owned()
    }

    pub fn gap(&self) -> f64 {
        if self.energies.len() < 2 {
            f64::INFINITY
        } else {
            self.energies[1] - self.energies[0]
        }
    }
}

/// Something that can be diagonalized at every point of the manifold.
pub trait SpectralModel {
    fn spectrum(&self, eta: &ParamPoint) -> Result<Spectrum>;
}

/// A family `η ↦ H(η)` of dense Hermitian matrices.
pub struct HamiltonianFamily<F> {
    h: F,
}

impl<F: Fn(&ParamPoint) -> DMatrix<C64>> HamiltonianFamily<F> {
    pub fn new(h: F) -> Self {
        Self { h }
    }

    pub fn hamiltonian(&self, eta: &ParamPoint) -> DMatrix<C64> {
        (self.h)(eta)
    }
}

impl<F: Fn(&ParamPoint) -> DMatrix<C64>> SpectralModel for HamiltonianFamily<F> {
    fn spectrum(&self, eta: &ParamPoint) -> Result<Spectrum> {
        diagonalize(&(self.h)(eta))
    }
}

/// Dense Hermitian eigendecomposition, sorted ascending.
pub fn diagonalize(h: &DMatrix<C64>) -> Result<Spectrum> {
    if !h.is_square() || h.nrows() == 0 {
        return Err(Error::InvalidParameter("Hamiltonian must be a non-empty square matrix".into()));
    }
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if (h - h.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale) {
        return Err(Error::InvalidParameter("Hamiltonian is not Hermitian".into()));
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), h.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum { energies, vectors })
}

/// Multiply by a global phase so the first component above `1e-8` in modulus
/// is real and positive.
pub fn fix_phase(v: &mut DVector<C64>) {
    if let Some(c) = v.iter().find(|c| c.norm() > 1e-8).copied() {
        let rot = c.conj() / c.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// `Σ_{n≠g} ⟨g|∂_μH|n⟩⟨n|∂_νH|g⟩ / (E_n − E_g)²` as a complex matrix.
fn spectral_tensor<M, G>(model: &M, eta: &ParamPoint, grad_h: G) -> Result<DMatrix<C64>>
where
    M: SpectralModel,
    G: Fn(&ParamPoint, usize) -> DMatrix<C64>,
{
    let s = model.spectrum(eta)?;
    if s.gap() < DEGENERACY_GAP {
        return Err(Error::Singular(format!("energy levels cross: gap {:.3e}", s.gap())));
    }
    let d = eta.dim();
    let g = s.ground();
    // rows: ⟨n|∂_μH|g⟩ for every excited n
    let columns: Vec<DVector<C64>> = (0..d).map(|mu| s.vectors.adjoint() * (grad_h(eta, mu) * &g)).collect();
    let mut q = DMatrix::zeros(d, d);
    for mu in 0..d {
        for nu in 0..d {
            q[(mu, nu)] = (1..s.energies.len())
                .map(|n| {
                    let de = s.energies[n] - s.energies[0];
                    columns[mu][n].conj() * columns[nu][n] / (de * de)
                })
                .sum();
        }
    }
    Ok(q)
}

/// Ground-state Berry curvature
/// `V_μν = Im Σ_{n≠g} ⟨g|∂_μH|n⟩⟨n|∂_νH|g⟩ / (E_n − E_g)²`.
pub fn berry_curvature_sum<M, G>(model: &M, eta: &ParamPoint, grad_h: G) -> Result<DMatrix<f64>>
where
    M: SpectralModel,
    G: Fn(&ParamPoint, usize) -> DMatrix<C64>,
{
    Ok(spectral_tensor(model, eta, grad_h)?.map(|z| z.im))
}

/// Quantum geometric tensor from the same perturbative sum.
pub fn qgt_spectral<M, G>(model: &M, eta: &ParamPoint, grad_h: G) -> Result<GeometricTensor>
where
    M: SpectralModel,
    G: Fn(&ParamPoint, usize) -> DMatrix<C64>,
{
    Ok(GeometricTensor { q: spectral_tensor(model, eta, grad_h)? })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricTensor {
    pub q: DMatrix<C64>,
}

impl GeometricTensor {
    /// Fubini–Study metric, `Re Q`.
    pub fn metric(&self) -> DMatrix<f64> {
        self.q.map(|z| z.re)
    }

    /// Curvature form, `Im Q`.
    pub fn curvature(&self) -> DMatrix<f64> {
        self.q.map(|z| z.im)
    }

    /// Hermiticity, real non-negative diagonal and antisymmetric imaginary part.
    pub fn check_invariants(&self) -> Result<()> {
        let d = self.q.nrows();
        for mu in 0..d {
            let diag = self.q[(mu, mu)];
            if diag.im.abs() > 1e-8 || diag.re < -1e-10 {
                return Err(Error::InvalidParameter(format!("diagonal entry {mu} = {diag} is not real non-negative")));
            }
            for nu in 0..d {
                if (self.q[(mu, nu)] - self.q[(nu, mu)].conj()).norm() > 1e-8 {
                    return Err(Error::InvalidParameter(format!("Q is not Hermitian at ({mu}, {nu})")));
                }
            }
        }
        Ok(())
    }
}

fn normalized(mut v: DVector<C64>) -> Result<DVector<C64>> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter("state has zero or non-finite norm".into()));
    }
    v.unscale_mut(n);
    Ok(v)
}

/// Rotate `v` so that `⟨reference|v⟩` is real and positive.
fn align(reference: &DVector<C64>, v: DVector<C64>) -> Result<DVector<C64>> {
    let ov = reference.dotc(&v);
    if ov.norm() < 0.5 {
        return Err(Error::StepTooLarge(format!("overlap with the centre state is only {:.3e}", ov.norm())));
    }
    Ok(v * (ov.conj() / ov.norm()))
}

fn qgt_at_step<S>(state_map: &S, eta: &ParamPoint, psi: &DVector<C64>, h: f64) -> Result<DMatrix<C64>>
where
    S: Fn(&ParamPoint) -> Result<DVector<C64>>,
{
    let d = eta.dim();
    let mut grads = Vec::with_capacity(d);
    for mu in 0..d {
        let plus = align(psi, normalized(state_map(&eta.shifted(mu, h))?)?)?;
        let minus = align(psi, normalized(state_map(&eta.shifted(mu, -h))?)?)?;
        grads.push((plus - minus) / C64::new(2.0 * h, 0.0));
    }
    let proj: Vec<C64> = grads.iter().map(|g| psi.dotc(g)).collect();
    Ok(DMatrix::from_fn(d, d, |mu, nu| grads[mu].dotc(&grads[nu]) - proj[mu].conj() * proj[nu]))
}

/// `Q_μν = ⟨∂_μΨ|∂_νΨ⟩ − ⟨∂_μΨ|Ψ⟩⟨Ψ|∂_νΨ⟩` by gauge-fixed central differences.
///
/// The result is Richardson-extrapolated from steps `h` and `h/2`, and the
/// two raw estimates must agree within [`RICHARDSON_TOL`] (relative to the
/// tensor's size when that exceeds one).
pub fn qgt_numeric<S>(state_map: S, eta: &ParamPoint, step: f64) -> Result<GeometricTensor>
where
    S: Fn(&ParamPoint) -> Result<DVector<C64>>,
{
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive (got {step})")));
    }
    let psi = normalized(state_map(eta)?)?;
    let coarse = qgt_at_step(&state_map, eta, &psi, step)?;
    let fine = qgt_at_step(&state_map, eta, &psi, step / 2.0)?;
    let scale = fine.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let moved = (&fine - &coarse).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if moved > RICHARDSON_TOL * scale {
        return Err(Error::StepTooLarge(format!("halving the step moved Q by {moved:.3e}")));
    }
    let q = (fine * C64::new(4.0, 0.0) - coarse) / C64::new(3.0, 0.0);
    Ok(GeometricTensor { q })
}

/// `F = |⟨Ψ(η₁)|Ψ(η₂)⟩|` for normalized ground states.
pub fn fidelity<S>(state_map: S, eta1: &ParamPoint, eta2: &ParamPoint) -> Result<f64>
where
    S: Fn(&ParamPoint) -> Result<DVector<C64>>,
{
    let a = normalized(state_map(eta1)?)?;
    let b = normalized(state_map(eta2)?)?;
    Ok(a.dotc(&b).norm().min(1.0))
}

/// XY-chain fidelity from the mode product `Π_k |cos((θ_k − θ_k′)/2)|`.
pub fn xy_mode_fidelity(gamma: f64, lambda1: f64, lambda2: f64, n_sites: usize) -> Result<f64> {
    let a = mode_angles(&XyParams::new(gamma, lambda1, n_sites)?);
    let b = mode_angles(&XyParams::new(gamma, lambda2, n_sites)?);
    Ok(a.iter().zip(&b).map(|(x, y)| ((x.theta() - y.theta()) / 2.0).cos().abs()).product())
}
