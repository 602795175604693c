//! Closed-form side of the counting laws and splitting asymptotics, kept in
//! one place so model modules compare computation against formulas with a
//! single source of truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormulaId {
    /// Strip, Dirichlet–Neumann: |J_h| ~ L/(2h).
    StripDN,
    /// Strip, Neumann–Neumann: |J_h| ~ L/h.
    StripNN,
    /// Annulus, Dirichlet at R, Neumann at 1: |J_h| ~ 1/(2h) − (1−R²)/(4h|ln R|).
    AnnulusDN,
    /// Neumann half-line ground splitting μ₀ − h ~ 2π^{−1/2} h (ξ/√h) e^{−ξ²/h}.
    HalflineNeuSplit,
    /// Dirichlet half-line ground splitting, opposite sign.
    HalflineDirSplit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionReport {
    pub geometry: Geometry,
    pub h: f64,
    pub predicted_count: f64,
    /// Momentum window (in ξ = mh for the strip, in m for the annulus) that
    /// contains all counted fibers.
    pub window: (f64, f64),
    /// Annulus crossover momentum (1−R²)/(4h|ln R|), when applicable.
    pub transition: Option<f64>,
    pub formula_id: FormulaId,
}

/// Transition radius R̃ = √((1−R²)/(2|ln R|)).
pub fn r_tilde(r_inner: f64) -> f64 {
    ((1.0 - r_inner * r_inner) / (2.0 * r_inner.ln().abs())).sqrt()
}

/// Leading annulus count (1 − R̃²)/(2h), identically 1/(2h) − (1−R²)/(4h|ln R|).
pub fn annulus_count(r_inner: f64, h: f64) -> f64 {
    (1.0 - r_tilde(r_inner).powi(2)) / (2.0 * h)
}

/// Predicted half-line splitting μ₀ − h; negative for Neumann, positive for Dirichlet.
///
/// The constant is 2π^{−1/2}: the Weber-function condition U(a, √2 ξ/√h) = 0
/// forces a + 1/2 ∼ −ξ/√(πh)·e^{−ξ²/h}, and μ₀ − h = −2h(a + 1/2); equivalently
/// the boundary layer doubles the ground-state trace, u₀(0) ∼ 2(πh)^{−1/4}e^{−ξ²/2h}.
pub fn halfline_splitting(formula: FormulaId, xi: f64, h: f64) -> Result<f64> {
    let base = 2.0 * std::f64::consts::PI.powf(-0.5) * h * (xi / h.sqrt()) * (-xi * xi / h).exp();
    match formula {
        FormulaId::HalflineNeuSplit => Ok(base),
        FormulaId::HalflineDirSplit => Ok(-base),
        _ => Err(Error::InvalidParameter("not a half-line splitting formula".into())),
    }
}

pub fn predict(formula_id: FormulaId, geometry: Geometry, h: f64) -> Result<PredictionReport> {
    geometry.validate()?;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    let c = 2.0; // rough-window margin, matching the scan modules
    match (formula_id, geometry) {
        (FormulaId::StripDN, Geometry::Strip { l }) => Ok(PredictionReport {
            geometry,
            h,
            predicted_count: l / (2.0 * h),
            window: (-l - c * h.sqrt(), c * h.sqrt()),
            transition: None,
            formula_id,
        }),
        (FormulaId::StripNN, Geometry::Strip { l }) => Ok(PredictionReport {
            geometry,
            h,
            predicted_count: l / h,
            window: (-l - c * h.sqrt(), c * h.sqrt()),
            transition: None,
            formula_id,
        }),
        (FormulaId::AnnulusDN, Geometry::Annulus { r_inner }) => {
            let transition = (1.0 - r_inner * r_inner) / (4.0 * h * r_inner.ln().abs());
            Ok(PredictionReport {
                geometry,
                h,
                predicted_count: annulus_count(r_inner, h),
                window: (
                    r_inner * r_inner / (2.0 * h) - (r_inner + c) / h.sqrt(),
                    0.5 / h + (1.0 + c) / h.sqrt(),
                ),
                transition: Some(transition),
                formula_id,
            })
        }
        _ => Err(Error::InvalidParameter(format!(
            "formula {formula_id:?} does not apply to geometry {geometry:?}"
        ))),
    }
}

/// Strip momentum windows of the classification argument:
/// favorable 𝓘 = [−L+ε, −L/2−ε], unfavorable 𝓙 = [−L/2+ε, −ε], both in ξ = mh.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentumWindows {
    pub eps: f64,
    pub i_eps: (f64, f64),
    pub j_eps: (f64, f64),
    pub rough_window: (f64, f64),
}

impl MomentumWindows {
    pub fn new(l: f64, h: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < l / 4.0) {
            return Err(Error::InvalidParameter(format!("ε must lie in (0, L/4), got {eps} for L = {l}")));
        }
        let c = 2.0;
        Ok(Self {
            eps,
            i_eps: (-l + eps, -l / 2.0 - eps),
            j_eps: (-l / 2.0 + eps, -eps),
            rough_window: (-l - c * h.sqrt(), c * h.sqrt()),
        })
    }
}

/// Annulus momentum windows of §-style classification, in the variable 2mh:
/// favorable when R̃² + ε' bounds hold, unfavorable below the crossover.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnnulusPrediction {
    pub r_inner: f64,
    pub r_tilde: f64,
}

impl AnnulusPrediction {
    pub fn new(r_inner: f64) -> Result<Self> {
        if !(r_inner > 0.0 && r_inner < 1.0) {
            return Err(Error::InvalidParameter(format!("inner radius must lie in (0,1), got {r_inner}")));
        }
        Ok(Self { r_inner, r_tilde: r_tilde(r_inner) })
    }

    pub fn predicted_count(&self, h: f64) -> f64 {
        annulus_count(self.r_inner, h)
    }

    /// Largest admissible ε for the classification windows.
    pub fn max_eps(&self) -> f64 {
        let rt2 = self.r_tilde * self.r_tilde;
        let r2 = self.r_inner * self.r_inner;
        0.5 * (1.0 - rt2).min(rt2 - r2)
    }

    /// Favorable window in m: (1−R²)/(2|ln R|) + ε < 2mh < 1 − ε.
    pub fn window_favorable(&self, h: f64, eps: f64) -> (f64, f64) {
        let rt2 = self.r_tilde * self.r_tilde;
        ((rt2 + eps) / (2.0 * h), (1.0 - eps) / (2.0 * h))
    }

    /// Unfavorable window in m: R² + ε < 2mh < (1−R²)/(2|ln R|) − ε.
    pub fn window_unfavorable(&self, h: f64, eps: f64) -> (f64, f64) {
        let rt2 = self.r_tilde * self.r_tilde;
        let r2 = self.r_inner * self.r_inner;
        ((r2 + eps) / (2.0 * h), (rt2 - eps) / (2.0 * h))
    }
}
