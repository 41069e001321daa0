//! Finite-size scaling: peak location, least-squares fits in log variables,
//! and the critical and dynamical exponents built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::xy_chain::dispersion;

/// Default resolution of [`locate_peak`] in the control parameter.
pub const PEAK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitKind {
    /// value against ln N
    LogSize,
    /// value against ln|λ − λ_c|
    LogDistance,
    /// ln(distance) against ln N; slope is minus the exponent
    PowerLaw,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub kind: FitKind,
    /// Transformed `(x, y)` pairs the fit was computed from, sorted by x.
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    /// Exponent of a power-law fit, `−slope`.
    pub fn exponent(&self) -> f64 {
        -self.slope
    }
}

/// Ordinary least squares on `(x, y)` pairs. Input order does not matter.
fn ols(raw: Vec<(f64, f64)>, kind: FitKind) -> Result<ScalingFit> {
    if raw.len() < 4 {
        return Err(Error::InsufficientData(format!("need ≥ 4 points, got {}", raw.len())));
    }
    if raw.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidParameter("non-finite point in fit input".into()));
    }
    let mut points = raw;
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 1e-300) || sxx <= 1e-24 * points.iter().map(|p| p.0 * p.0).sum::<f64>() {
        return Err(Error::RankDeficient("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(ScalingFit { slope, intercept, r_squared, kind, points })
}

/// Plain linear fit of `y` against `x`.
pub fn fit_linear(points: &[(f64, f64)], kind: FitKind) -> Result<ScalingFit> {
    ols(points.to_vec(), kind)
}

/// `value = κ₁ ln N + c`. Sizes must span at least 1.5 decades.
pub fn fit_log_size(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.iter().any(|p| !(p.0 > 0.0)) {
        return Err(Error::InvalidParameter("sizes must be positive".into()));
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if points.len() >= 4 && (hi / lo).log10() < 1.5 {
        return Err(Error::InsufficientData(format!("sizes span only {:.2} decades", (hi / lo).log10())));
    }
    ols(points.iter().map(|&(n, v)| (n.ln(), v)).collect(), FitKind::LogSize)
}

/// `value = κ₂ ln|λ − λ_c| + c` from points on one side of `λ_c` with
/// distances inside `[1e-6, 1e-2]`.
pub fn fit_log_distance(points: &[(f64, f64)], lambda_c: f64) -> Result<ScalingFit> {
    let above = points.iter().filter(|p| p.0 > lambda_c).count();
    let below = points.iter().filter(|p| p.0 < lambda_c).count();
    if above > 0 && below > 0 {
        return Err(Error::InvalidParameter("points straddle the critical point".into()));
    }
    for &(l, _) in points {
        let d = (l - lambda_c).abs();
        // a relative slack absorbs rounding in the caller's grid
        if !(1e-6 * (1.0 - 1e-9)..=1e-2 * (1.0 + 1e-9)).contains(&d) {
            return Err(Error::InvalidParameter(format!("distance {d:e} outside [1e-6, 1e-2]")));
        }
    }
    ols(points.iter().map(|&(l, v)| ((l - lambda_c).abs().ln(), v)).collect(), FitKind::LogDistance)
}

/// `distance ∝ N^{−exponent}`, fitted as `ln d` against `ln N`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(Error::InvalidParameter("power-law fit needs positive sizes and distances".into()));
    }
    ols(points.iter().map(|&(n, d)| (n.ln(), d.ln())).collect(), FitKind::PowerLaw)
}

/// `ln y` against `ln x` without the size semantics of [`fit_power_law`].
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(Error::InvalidParameter("log-log fit needs positive data".into()));
    }
    ols(points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect(), FitKind::Linear)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakLocation {
    pub lambda_m: f64,
    pub height: f64,
    pub bracket: (f64, f64),
}

/// Golden-section maximisation of a unimodal curve on `bracket`.
///
/// Fails with `NotUnimodal` when the maximum sits on the bracket edge, so the
/// caller can widen the bracket and retry.
pub fn locate_peak<F: Fn(f64) -> Result<f64>>(curve: F, bracket: (f64, f64), tol: f64) -> Result<PeakLocation> {
    let (lo, hi) = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = curve(c)?;
    let mut fd = curve(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = curve(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = curve(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let height = curve(x)?;
    let (f_lo, f_hi) = (curve(lo)?, curve(hi)?);
    if x - lo <= tol || hi - x <= tol || height < f_lo || height < f_hi {
        return Err(Error::NotUnimodal { lo, hi });
    }
    Ok(PeakLocation { lambda_m: x, height, bracket })
}

/// Scan `samples` points, zoom on the best sample and its neighbours until
/// the bracket is narrow, then finish with [`locate_peak`].
///
/// Handles curves that are unimodal only near the peak.
pub fn scan_peak<F: Fn(f64) -> Result<f64>>(
    curve: F,
    bracket: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<PeakLocation> {
    let samples = samples.max(5);
    let (mut a, mut b) = bracket;
    for _ in 0..64 {
        if b - a <= 1e3 * tol {
            break;
        }
        let step = (b - a) / (samples - 1) as f64;
        let mut best = (0, f64::NEG_INFINITY);
        for i in 0..samples {
            let v = curve(a + step * i as f64)?;
            if v > best.1 {
                best = (i, v);
            }
        }
        if best.0 == 0 || best.0 == samples - 1 {
            return Err(Error::NotUnimodal { lo: bracket.0, hi: bracket.1 });
        }
        let centre = a + step * best.0 as f64;
        // keep the golden-section stage well above its own tolerance
        let half = step.max(400.0 * tol);
        a = (centre - half).max(bracket.0);
        b = (centre + half).min(bracket.1);
    }
    let peak = locate_peak(&curve, (a, b), tol)?;
    Ok(PeakLocation { bracket, ..peak })
}

/// `ν = |κ₂/κ₁|`.
pub fn critical_exponent(kappa1: f64, kappa2: f64) -> Result<f64> {
    if kappa1 == 0.0 || !kappa1.is_finite() || !kappa2.is_finite() {
        return Err(Error::InvalidParameter(format!("cannot form |κ₂/κ₁| from ({kappa1}, {kappa2})")));
    }
    Ok((kappa2 / kappa1).abs())
}

/// Slope of `ln Λ_φ` against `ln φ` at `λ = 1` over `φ ∈ [1e-4, 1e-3]`.
pub fn dynamical_exponent(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("γ must be ≥ 0 (got {gamma})")));
    }
    let points: Vec<(f64, f64)> = (0..21)
        .map(|i| {
            let phi = 1e-4 * 10f64.powf(i as f64 / 20.0);
            (phi, dispersion(gamma, 1.0, phi))
        })
        .collect();
    Ok(fit_log_log(&points)?.slope)
}
