//! Band functions of the annulus fibers H_m = h²(−d²/dr² − (1/r)d/dr)
//! + (mh/r − r/2)² on (R, 1) with the r dr weight: momentum scans, the
//! 1/(2h) − (1−R²)/(4h|ln R|) counting law with its transition radius R̃,
//! the r^m e^{−r²/4h} quasi-mode machinery, and the Temple-certified
//! Dirichlet lower bound for unfavorable momenta.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::predictions::AnnulusPrediction;
use crate::strip::{smoothstep, smoothstep_prime};
use crate::tridiag::{
    compare_to_free, count_below_diffs, default_grid_n, discretize_with, richardson_eigenvalue_with, temple_bound,
    SolverConfig, TempleBound,
};
use crate::types::{
    make_fiber_problem, BoundaryCondition, BoundaryPair, CountResult, FiberProblem, Geometry, Grid, Potential,
    ProblemVariant, Weight,
};

/// The explicit solution u(r) = r^m e^{−r²/4h} of H_m u = h u on (0, ∞),
/// carried around through its phase: |u(r)|² = e^{−φ(r)/2h} with
/// φ(r) = r² − 2r_*² ln r, minimized at r_* = √(2mh) with φ''(r_*) = 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiMode {
    pub m: i64,
    pub h: f64,
    pub r_star: f64,
}

impl QuasiMode {
    pub fn new(m: i64, h: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter(format!("quasi-mode needs m ≥ 1, got {m}")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
        }
        Ok(Self { m, h, r_star: (2.0 * m as f64 * h).sqrt() })
    }

    /// Agmon phase φ(r) = r² − 2r_*² ln r.
    pub fn phi(&self, r: f64) -> f64 {
        r * r - 2.0 * self.r_star * self.r_star * r.ln()
    }

    /// φ(r_*) = r_*²(1 − 2 ln r_*), the global minimum of φ.
    pub fn phi_star(&self) -> f64 {
        self.phi(self.r_star)
    }

    /// Laplace-method value of the shifted norm ∫ e^{−(φ(r)−φ(r_*))/2h} r dr:
    /// √(2π·2h/φ''(r_*))·r_* = √(πh)·r_* since φ''(r_*) = 4. (The unshifted
    /// norm carries the extra factor e^{−φ(r_*)/2h}.)
    pub fn laplace_norm(&self) -> f64 {
        (std::f64::consts::PI * self.h).sqrt() * self.r_star
    }

    /// Shifted amplitude ũ(r) = e^{−(φ(r)−φ(r_*))/4h} = u(r)/u(r_*).
    pub fn amplitude(&self, r: f64) -> f64 {
        (-(self.phi(r) - self.phi_star()) / (4.0 * self.h)).exp()
    }

    /// Logarithmic derivative u'(r)/u(r) = (r_*² − r²)/(2hr).
    pub fn log_derivative(&self, r: f64) -> f64 {
        (self.r_star * self.r_star - r * r) / (2.0 * self.h * r)
    }
}

fn annulus_variant(variant: ProblemVariant) -> Result<ProblemVariant> {
    match variant {
        ProblemVariant::MixedDN | ProblemVariant::PureNN => Ok(variant),
        other => Err(Error::InvalidParameter(format!(
            "annulus model takes MixedDN or PureNN, got {other:?}"
        ))),
    }
}

fn annulus_band(r_inner: f64, m: i64, h: f64, variant: ProblemVariant, k: usize) -> Result<(f64, f64)> {
    let problem = make_fiber_problem(Geometry::Annulus { r_inner }, m, h, annulus_variant(variant)?)?;
    let config = SolverConfig::default();
    let n = default_grid_n(&problem, &config);
    richardson_eigenvalue_with(&problem, k, n, &config)
}

/// Ground band λ₀(H_m).
pub fn band0_annulus(r_inner: f64, m: i64, h: f64, variant: ProblemVariant) -> Result<f64> {
    annulus_band(r_inner, m, h, variant, 0).map(|(v, _)| v)
}

/// Second band λ₁(H_m); the contract being certified is λ₁ > h for all m.
pub fn second_band_annulus(r_inner: f64, m: i64, h: f64, variant: ProblemVariant) -> Result<f64> {
    annulus_band(r_inner, m, h, variant, 1).map(|(v, _)| v)
}

/// Integer momenta with m inside the rough localization window
/// (R²/2h − 2(R+1)/√h, 1/2h + 4/√h).
pub fn scan_range_annulus(r_inner: f64, h: f64) -> Result<(i64, i64)> {
    Geometry::Annulus { r_inner }.validate()?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    let s = h.sqrt();
    let lo = r_inner * r_inner / (2.0 * h) - 2.0 * (r_inner + 1.0) / s;
    let hi = 1.0 / (2.0 * h) + 4.0 / s;
    let m_lo = lo.floor() as i64;
    let m_hi = hi.ceil() as i64;
    if m_hi - m_lo + 1 < 10 {
        return Err(Error::WindowTooSmall(format!(
            "rough window ({lo:.2}, {hi:.2}) holds {} momenta at h = {h}; need ≥ 10",
            (m_hi - m_lo + 1).max(0)
        )));
    }
    Ok((m_lo, m_hi))
}

/// Extension lengths for the free-well reference of `compare_to_free`,
/// walked along the Agmon phase: each side is pushed out until
/// φ(end) − φ(r_*) ≥ 80h, suppressing the reference's own truncation effect
/// to e^{−40} relative — far below any tolerance band in use. φ → ∞ at both
/// 0 and ∞, so both walks terminate (the left one additionally stops before
/// the axis).
fn extension_lengths(r_inner: f64, r_star: f64, h: f64, delta: f64) -> (f64, f64) {
    let phi = |r: f64| r * r - 2.0 * r_star * r_star * r.ln();
    let target = phi(r_star) + 80.0 * h;
    let mut left = 0.0;
    let mut r = r_inner;
    while r - delta > delta && phi(r) < target {
        r -= delta;
        left += delta;
    }
    let mut right = 0.0;
    let mut r = 1.0;
    while phi(r) < target {
        r += delta;
        right += delta;
    }
    (left, right)
}

/// (λ₀, comparator diff) for one fiber. Fibers that sit clearly above the
/// Landau level (λ₀ > h(1 + 10⁻³), three orders above the discretization
/// bias) skip the reference solve; everything near the threshold goes
/// through the bias-cancelling comparison against the free well.
fn annulus_comparison(
    r_inner: f64,
    m: i64,
    h: f64,
    variant: ProblemVariant,
    config: &SolverConfig,
) -> Result<(f64, f64)> {
    let problem = make_fiber_problem(Geometry::Annulus { r_inner }, m, h, variant)?;
    let n = default_grid_n(&problem, config);
    let (lambda0, _) = richardson_eigenvalue_with(&problem, 0, n, config)?;
    if m < 1 || lambda0 > h * 1.001 {
        return Ok((lambda0, lambda0 - h));
    }
    let delta = (1.0 - r_inner) / (n + 1) as f64;
    let r_star = (2.0 * m as f64 * h).sqrt();
    let (left, right) = extension_lengths(r_inner, r_star, h, delta);
    let c = compare_to_free(&problem, n, left, right, config)?;
    Ok((c.lambda0, c.diff))
}

fn comparator_config() -> SolverConfig {
    SolverConfig { bisect_rel_tol: 1e-14, ..SolverConfig::default() }
}

fn annulus_rows(r_inner: f64, h: f64, variant: ProblemVariant) -> Result<Vec<(i64, f64, f64)>> {
    let (m_lo, m_hi) = scan_range_annulus(r_inner, h)?;
    let config = comparator_config();
    (m_lo..=m_hi)
        .into_par_iter()
        .map(|m| annulus_comparison(r_inner, m, h, variant, &config).map(|(v, d)| (m, v, d)))
        .collect()
}

/// Scans the rough window and counts λ₀(H_m) < h against the law
/// 1/(2h) − (1−R²)/(4h|ln R|) (mixed) or (1−R²)/(2h) (pure Neumann).
/// Threshold resolution works exactly as in `strip::count_strip`.
pub fn count_annulus_variant(r_inner: f64, h: f64, variant: ProblemVariant, tol: f64) -> Result<CountResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    annulus_variant(variant)?;
    let rows = annulus_rows(r_inner, h, variant)?;
    let band = tol * h;
    let ground_values: BTreeMap<i64, f64> = rows.iter().map(|&(m, v, _)| (m, v)).collect();
    let diffs: Vec<(i64, f64)> = rows.iter().map(|&(m, _, d)| (m, d)).collect();
    let (count, ambiguous_m) = count_below_diffs(&diffs, band);
    let labels: BTreeMap<i64, i8> = diffs
        .iter()
        .map(|&(m, d)| (m, if d < -band { -1 } else if d > band { 1 } else { 0 }))
        .collect();
    let predicted = match variant {
        ProblemVariant::PureNN => (1.0 - r_inner * r_inner) / (2.0 * h),
        _ => AnnulusPrediction::new(r_inner)?.predicted_count(h),
    };
    let (m_lo, m_hi) = scan_range_annulus(r_inner, h)?;
    Ok(CountResult {
        h,
        geometry: Geometry::Annulus { r_inner },
        m_window: (m_lo, m_hi),
        ratio: count as f64 / predicted,
        ground_values,
        labels,
        count,
        predicted,
        ambiguous_m,
    })
}

/// Mixed Dirichlet–Neumann count, the |J_h| of Theorem 1.2's law.
pub fn count_annulus(r_inner: f64, h: f64, tol: f64) -> Result<CountResult> {
    count_annulus_variant(r_inner, h, ProblemVariant::MixedDN, tol)
}

/// Locates the lower edge of the favorable run (the first m whose comparator
/// diff resolves below −10⁻¹²h, scanning upward within the longest such run)
/// and returns it with the predicted crossover (1−R²)/(4h|ln R|).
pub fn transition_scan(r_inner: f64, h: f64) -> Result<(i64, f64)> {
    let rows = annulus_rows(r_inner, h, ProblemVariant::MixedDN)?;
    let band = 1e-12 * h;
    let mut best: Option<(i64, usize)> = None;
    let mut run_start: Option<i64> = None;
    let mut run_len = 0usize;
    for &(m, _, d) in &rows {
        if d < -band {
            if run_start.is_none() {
                run_start = Some(m);
                run_len = 0;
            }
            run_len += 1;
            if best.map_or(true, |(_, len)| run_len > len) {
                best = Some((run_start.unwrap(), run_len));
            }
        } else {
            run_start = None;
        }
    }
    let predicted = (1.0 - r_inner * r_inner) / (4.0 * h * r_inner.ln().abs());
    match best {
        Some((m, _)) => Ok((m, predicted)),
        None => Err(Error::NoCrossing(format!(
            "no momentum resolved below h for R = {r_inner}, h = {h}"
        ))),
    }
}

/// Discrete relative residual ‖(A − h)w̃‖ / ‖w̃‖ of the sampled
/// Liouville-transformed quasi-mode w = √r·u against the rows of the
/// discrete operator. The quasi-mode solves the ODE exactly, so the interior
/// residual is pure O(Δ²) truncation error; the first and last rows see the
/// imposed (wrong-for-u) boundary conditions and are excluded unless
/// `include_boundary_rows` is set.
pub fn quasimode_residual(r_inner: f64, m: i64, h: f64, grid: Grid, include_boundary_rows: bool) -> Result<f64> {
    let qm = QuasiMode::new(m, h)?;
    let problem = make_fiber_problem(Geometry::Annulus { r_inner }, m, h, ProblemVariant::MixedDN)?;
    let op = discretize_with(&problem, grid, &SolverConfig::default())?;
    let z: Vec<f64> = op
        .nodes
        .iter()
        .zip(&op.row_scale)
        .map(|(&r, &s)| qm.amplitude(r) * r.sqrt() / s)
        .collect();
    let resid = op.apply_shifted(&z, h);
    let rows = if include_boundary_rows { 0..op.dim() } else { 1..op.dim() - 1 };
    let num: f64 = resid[rows].iter().map(|v| v * v).sum::<f64>().sqrt();
    let den: f64 = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(num / den)
}

/// Quadrature-vs-Laplace comparison of the quasi-mode norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    /// Trapezoid value of ∫_R^1 e^{−(φ(r)−φ(r_*))/2h} r dr at spacing √h/64.
    pub exact: f64,
    /// √(πh)·r_*, the Laplace-method value of the same shifted integral.
    pub predicted: f64,
    pub ratio: f64,
}

/// Checks the Laplace asymptotic of ∫_R^1 |u|² r dr (both sides carry the
/// common factor e^{−φ(r_*)/2h}, removed to avoid underflow).
pub fn laplace_norm_check(r_inner: f64, m: i64, h: f64) -> Result<LaplaceCheck> {
    let qm = QuasiMode::new(m, h)?;
    let eps = 0.05;
    let rs2 = qm.r_star * qm.r_star;
    if !(rs2 >= r_inner * r_inner + eps && rs2 <= 1.0 - eps) {
        return Err(Error::WindowViolation(format!(
            "r_*² = {rs2:.4} outside [R²+ε, 1−ε] = [{:.4}, {:.4}]",
            r_inner * r_inner + eps,
            1.0 - eps
        )));
    }
    let spacing = h.sqrt() / 64.0;
    let n = ((1.0 - r_inner) / spacing).ceil() as usize;
    let dr = (1.0 - r_inner) / n as f64;
    let mut exact = 0.0;
    for i in 0..=n {
        let r = r_inner + i as f64 * dr;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let a = qm.amplitude(r);
        exact += w * a * a * r * dr;
    }
    let predicted = qm.laplace_norm();
    Ok(LaplaceCheck { exact, predicted, ratio: exact / predicted })
}

/// Closed form of the boundary term h²ũ'(1)ũ(1) in
/// q_m(χũ) − h‖χũ‖² = h²‖χ'ũ‖² + h²ũ'(1)ũ(1):
/// (h(r_*²−1)/2)·e^{−(φ(1)−φ(r_*))/2h} in the shifted normalization.
pub fn annulus_boundary_term(m: i64, h: f64) -> Result<f64> {
    let qm = QuasiMode::new(m, h)?;
    let a1 = qm.amplitude(1.0);
    Ok(h * (qm.r_star * qm.r_star - 1.0) / 2.0 * a1 * a1)
}

/// Rayleigh quotient excess q_m(χũ)/‖χũ‖² − h of the cutoff quasi-mode,
/// with the cutoff vanishing on [R, R+η/2] and equal to 1 on [R+η, 1],
/// by trapezoid quadrature at spacing √h/64 with analytic derivatives.
pub fn quasimode_rayleigh_annulus(r_inner: f64, m: i64, h: f64, eta: f64) -> Result<f64> {
    let qm = QuasiMode::new(m, h)?;
    let prediction = AnnulusPrediction::new(r_inner)?;
    let eps = prediction.max_eps().min(0.1);
    let (lo, hi) = prediction.window_favorable(h, eps);
    if !(lo <= m as f64 && m as f64 <= hi) {
        return Err(Error::WindowViolation(format!(
            "m = {m} outside favorable window [{lo:.2}, {hi:.2}] at ε = {eps:.3}"
        )));
    }
    if !(eta > 0.0 && r_inner + eta < qm.r_star) {
        return Err(Error::InvalidParameter(format!(
            "η must satisfy 0 < η and R+η < r_* = {:.4}, got {eta}",
            qm.r_star
        )));
    }
    // the proof's suppression condition: the cutoff region must carry more
    // Agmon weight than the outer boundary, φ(1) < φ(R+η) − ε|ln R|
    if !(qm.phi(1.0) < qm.phi(r_inner + eta) - eps * r_inner.ln().abs()) {
        return Err(Error::WindowViolation(format!(
            "η = {eta} too large: φ(1) = {:.4} ≥ φ(R+η) − ε|ln R| = {:.4}",
            qm.phi(1.0),
            qm.phi(r_inner + eta) - eps * r_inner.ln().abs()
        )));
    }
    let spacing = h.sqrt() / 64.0;
    let n = ((1.0 - r_inner) / spacing).ceil() as usize;
    let dr = (1.0 - r_inner) / n as f64;
    let mut energy = 0.0;
    let mut norm = 0.0;
    for i in 0..=n {
        let r = r_inner + i as f64 * dr;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let x = (r - r_inner - eta / 2.0) / (eta / 2.0);
        let chi = smoothstep(x);
        let dchi = smoothstep_prime(x) * 2.0 / eta;
        let u = qm.amplitude(r);
        let du = u * qm.log_derivative(r);
        let f = chi * u;
        let df = dchi * u + chi * du;
        let v = {
            let s = (qm.r_star * qm.r_star - r * r) / (2.0 * r);
            s * s
        };
        energy += w * (h * h * df * df + v * f * f) * r * dr;
        norm += w * f * f * r * dr;
    }
    if norm <= 0.0 {
        return Err(Error::InvalidTrial("cutoff quasi-mode vanishes on the interval".into()));
    }
    Ok(energy / norm - h)
}

/// The exterior Dirichlet problem of the unfavorable-momentum bound: H_m on
/// (R, r_* + 12√h) with Dirichlet ends (the far one a truncation), solved at
/// spacing √h/32.
pub fn halfdisc_problem(r_dirichlet: f64, m: i64, h: f64) -> Result<(FiberProblem, SolverConfig)> {
    let qm = QuasiMode::new(m, h)?;
    if !(r_dirichlet > 0.0) || !r_dirichlet.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Dirichlet radius must be positive, got {r_dirichlet}"
        )));
    }
    if qm.r_star < r_dirichlet + 2.0 * h.sqrt() {
        return Err(Error::WindowViolation(format!(
            "well r_* = {:.4} must sit at least 2√h beyond the Dirichlet circle r = {r_dirichlet}",
            qm.r_star
        )));
    }
    let problem = FiberProblem {
        interval: (r_dirichlet, qm.r_star + 12.0 * h.sqrt()),
        h,
        m,
        potential: Potential::AnnulusRadial,
        weight: Weight::Radial,
        bc: BoundaryPair::new(BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet),
        truncated: true,
    };
    problem.validate()?;
    Ok((problem, SolverConfig { spacing_divisor: 32.0, ..SolverConfig::default() }))
}

/// Temple lower/upper bounds on λ₀ − h for the exterior Dirichlet problem,
/// certifying λ₀ > h for unfavorable momenta.
///
/// The trial state is v = f·u with f(r) = ∫_R^r χ(ρ) ρ^{−1−2m} e^{ρ²/2h} dρ
/// (normalized to its plateau value), where χ fades from 1 to 0 between the
/// knots R + 0.4(r_*−R) and R + 0.7(r_*−R) — strictly inside (R, r_*) where
/// the Agmon weight still decays. The integrand spans hundreds of orders of
/// magnitude, so it is evaluated in shifted form e^{(φ(ρ)−φ(R))/2h}/ρ ≤ 1/ρ
/// (φ decreases on (R, r_*)) by cumulative trapezoid on the solver nodes,
/// and the amplitude u in shifted form e^{−(φ(r)−φ(r_*))/4h}. The gap
/// parameter is the proof's β = h.
pub fn dirichlet_halfdisc_bounds(r_dirichlet: f64, m: i64, h: f64) -> Result<TempleBound> {
    let qm = QuasiMode::new(m, h)?;
    let (problem, config) = halfdisc_problem(r_dirichlet, m, h)?;
    let n = default_grid_n(&problem, &config);
    let op = discretize_with(&problem, Grid::new(n)?, &config)?;

    let k1 = r_dirichlet + 0.4 * (qm.r_star - r_dirichlet);
    let k2 = r_dirichlet + 0.7 * (qm.r_star - r_dirichlet);
    let phi_r = qm.phi(r_dirichlet);
    let integrand = |rho: f64| {
        let chi = 1.0 - smoothstep((rho - k1) / (k2 - k1));
        chi * ((qm.phi(rho) - phi_r) / (2.0 * h)).exp() / rho
    };
    // cumulative trapezoid of f on the solver nodes, starting from f(R) = 0
    let mut f = Vec::with_capacity(op.dim());
    let mut acc = 0.0;
    let mut prev_r = r_dirichlet;
    let mut prev_g = integrand(r_dirichlet);
    for &r in &op.nodes {
        let g = integrand(r);
        acc += 0.5 * (prev_g + g) * (r - prev_r);
        f.push(acc);
        prev_r = r;
        prev_g = g;
    }
    let plateau = *f.last().unwrap();
    if !(plateau > 0.0) || !plateau.is_finite() {
        return Err(Error::Overflow(format!("trial integral degenerate: plateau = {plateau}")));
    }
    let trial: Vec<f64> = op
        .nodes
        .iter()
        .zip(&f)
        .zip(&op.row_scale)
        .map(|((&r, &fi), &s)| fi / plateau * qm.amplitude(r) * r.sqrt() / s)
        .collect();
    temple_bound(&op, &trial, h, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictions::r_tilde;
    use crate::tridiag::eigenvalue;

    #[test]
    fn favorable_momentum_below_h() {
        // 2mh = 0.8 > R̃² ≈ 0.541 at R = 0.5
        let h = 0.005;
        let v = band0_annulus(0.5, 80, h, ProblemVariant::MixedDN).unwrap();
        assert!(v < h, "λ₀ = {v} should be below h = {h}");
    }

    #[test]
    fn unfavorable_momentum_above_h() {
        // 2mh = 0.4 ∈ (R², R̃²)
        let h = 0.005;
        let v = band0_annulus(0.5, 40, h, ProblemVariant::MixedDN).unwrap();
        assert!(v > h, "λ₀ = {v} should exceed h = {h}");
    }

    #[test]
    fn second_band_above_h() {
        let h = 0.01;
        for m in [20, 40, 54, 80] {
            let v = second_band_annulus(0.5, m, h, ProblemVariant::MixedDN).unwrap();
            assert!(v > h, "λ₁ = {v} at m = {m}");
        }
    }

    #[test]
    fn count_matches_law_and_neumann_dominates() {
        let (r_inner, h) = (0.5, 0.005);
        let dn = count_annulus(r_inner, h, 1e-12).unwrap();
        let rt = r_tilde(r_inner);
        let law = dn.count as f64 * 2.0 * h / (1.0 - rt * rt);
        assert!((0.9..=1.1).contains(&law), "count·2h/(1−R̃²) = {law}");
        assert!((dn.predicted * 2.0 * h - 0.4589).abs() < 1e-3);
        let nn = count_annulus_variant(r_inner, h, ProblemVariant::PureNN, 1e-12).unwrap();
        assert!(dn.count < nn.count, "DN {} vs NN {}", dn.count, nn.count);
    }

    #[test]
    fn transition_located() {
        let (emp, pred) = transition_scan(0.5, 0.005).unwrap();
        assert!((pred - 54.1).abs() < 0.1);
        assert!((emp as f64 - pred).abs() <= 3.0, "empirical {emp} vs predicted {pred:.1}");
        // crossover scales like 1/h
        let (emp2, _) = transition_scan(0.5, 0.01).unwrap();
        let scale = emp as f64 / emp2 as f64;
        assert!((scale - 2.0).abs() < 0.2, "1/h scaling off: {scale}");
    }

    #[test]
    fn phi_crossover_closed_form() {
        // φ(1) = φ(R) exactly at r_*² = (1−R²)/(2|ln R|)
        for r_inner in [0.3, 0.5, 0.7] {
            let rt2 = (1.0 - r_inner * r_inner) / (2.0 * (r_inner as f64).ln().abs());
            let phi = |r: f64| r * r - 2.0 * rt2 * r.ln();
            assert!((phi(1.0) - phi(r_inner)).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_minimum_properties() {
        let qm = QuasiMode::new(35, 0.01).unwrap();
        assert!((qm.r_star * qm.r_star - 0.7).abs() < 1e-12);
        // φ'' (r_*) = 4 by centered difference
        let d = 1e-4;
        let second = (qm.phi(qm.r_star + d) + qm.phi(qm.r_star - d) - 2.0 * qm.phi_star()) / (d * d);
        assert!((second - 4.0).abs() < 1e-4, "φ''(r_*) = {second}");
        // closed-form minimum agrees with sampled minimization
        let sampled = (0..10000)
            .map(|i| qm.phi(0.5 + i as f64 * 1e-4))
            .fold(f64::INFINITY, f64::min);
        assert!((sampled - qm.phi_star()).abs() < 1e-7);
    }

    #[test]
    fn quasimode_residual_second_order() {
        let (r_inner, h) = (0.5, 0.01f64);
        let m = 35; // 2mh = 0.7
        let n = ((1.0 - r_inner) / (h.sqrt() / 16.0)).ceil() as usize;
        let coarse = quasimode_residual(r_inner, m, h, Grid::new(n).unwrap(), false).unwrap();
        assert!(coarse <= 1e-3, "residual {coarse}");
        let fine = quasimode_residual(r_inner, m, h, Grid::new(2 * n + 1).unwrap(), false).unwrap();
        let order = coarse / fine;
        assert!((3.5..=4.5).contains(&order), "halving ratio {order}");
        let with_bc = quasimode_residual(r_inner, m, h, Grid::new(n).unwrap(), true).unwrap();
        assert!(with_bc > 100.0 * coarse, "boundary rows should dominate: {with_bc} vs {coarse}");
    }

    #[test]
    fn laplace_ratio_near_one() {
        let c = laplace_norm_check(0.5, 35, 0.01).unwrap();
        assert!((0.9..=1.1).contains(&c.ratio), "ratio {}", c.ratio);
        let f = laplace_norm_check(0.5, 140, 0.0025).unwrap();
        assert!((f.ratio - 1.0).abs() < (c.ratio - 1.0).abs(), "{} vs {}", f.ratio, c.ratio);
        assert!(matches!(laplace_norm_check(0.5, 10, 0.01), Err(Error::WindowViolation(_))));
    }

    #[test]
    fn quasimode_rayleigh_negative_and_variational() {
        let (r_inner, h) = (0.5, 0.005);
        let m = 80; // 2mh = 0.8
        let eta = 0.1;
        let excess = quasimode_rayleigh_annulus(r_inner, m, h, eta).unwrap();
        assert!(excess < 0.0, "excess {excess}");
        let lambda0 = band0_annulus(r_inner, m, h, ProblemVariant::MixedDN).unwrap();
        assert!(excess >= lambda0 - h - 1e-12, "variational bound violated");
        // wrong window and bad η rejected
        assert!(matches!(
            quasimode_rayleigh_annulus(r_inner, 40, h, eta),
            Err(Error::WindowViolation(_))
        ));
        assert!(quasimode_rayleigh_annulus(r_inner, m, h, 0.9).is_err());
    }

    #[test]
    fn boundary_term_matches_quadrature() {
        let (r_inner, h) = (0.5, 0.005f64);
        let m = 80;
        let eta = 0.1;
        let qm = QuasiMode::new(m, h).unwrap();
        // energy − h·norm − h²‖χ'ũ‖² against the closed-form boundary term
        let spacing = h.sqrt() / 64.0;
        let n = ((1.0 - r_inner) / spacing).ceil() as usize;
        let dr = (1.0 - r_inner) / n as f64;
        let (mut energy, mut norm, mut chip) = (0.0, 0.0, 0.0);
        for i in 0..=n {
            let r = r_inner + i as f64 * dr;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let x = (r - r_inner - eta / 2.0) / (eta / 2.0);
            let chi = smoothstep(x);
            let dchi = smoothstep_prime(x) * 2.0 / eta;
            let u = qm.amplitude(r);
            let du = u * qm.log_derivative(r);
            let f = chi * u;
            let df = dchi * u + chi * du;
            let s = (qm.r_star * qm.r_star - r * r) / (2.0 * r);
            energy += w * (h * h * df * df + s * s * f * f) * r * dr;
            norm += w * f * f * r * dr;
            chip += w * (h * dchi * u) * (h * dchi * u) * r * dr;
        }
        let lhs = energy - h * norm - chip;
        let bterm = annulus_boundary_term(m, h).unwrap();
        assert!(bterm < 0.0);
        assert!((lhs - bterm).abs() <= 1e-3 * bterm.abs(), "lhs {lhs:e} vs bterm {bterm:e}");
    }

    #[test]
    fn temple_bound_positive_and_sandwiched() {
        // scaled form R = 1, well beyond the circle
        let (r_d, m, h) = (1.0, 22, 0.05);
        let b = dirichlet_halfdisc_bounds(r_d, m, h).unwrap();
        assert!(b.valid);
        assert!(b.lower > 0.0, "lower {e}", e = b.lower);
        let (problem, config) = halfdisc_problem(r_d, m, h).unwrap();
        let n = default_grid_n(&problem, &config);
        let op = discretize_with(&problem, Grid::new(n).unwrap(), &config).unwrap();
        let direct = eigenvalue(&op, 0, config.bisect_rel_tol).unwrap() - h;
        assert!(
            b.lower <= direct + 1e-14 && direct <= b.upper + 1e-14,
            "sandwich failed: {} ≤ {} ≤ {}",
            b.lower,
            direct,
            b.upper
        );
        // upper bound lives on the proof's exponential scale e^{−(φ(R)−φ(r_*))/2h}
        let qm = QuasiMode::new(m, h).unwrap();
        let scale = (-(qm.phi(r_d) - qm.phi_star()) / (2.0 * h)).exp();
        assert!(b.upper <= 50.0 * h * scale, "upper {} vs scale {}", b.upper, h * scale);
        assert!(b.upper >= 1e-3 * h * scale, "upper {} vs scale {}", b.upper, h * scale);
    }

    #[test]
    fn temple_bounds_scale_exactly() {
        // λ(R, h) = R²·λ(1, h/R²) under r = R·s; dyadic R makes it exact in fp
        let (r_d, h) = (0.5, 0.0125);
        let scaled = dirichlet_halfdisc_bounds(1.0, 22, h / (r_d * r_d)).unwrap();
        let direct = dirichlet_halfdisc_bounds(r_d, 22, h).unwrap();
        let map = r_d * r_d;
        assert!(
            (direct.lower - map * scaled.lower).abs() <= 1e-8 * (map * scaled.lower).abs(),
            "{} vs {}",
            direct.lower,
            map * scaled.lower
        );
        assert!((direct.upper - map * scaled.upper).abs() <= 1e-8 * (map * scaled.upper).abs());
    }

    #[test]
    fn window_too_small_flagged() {
        assert!(matches!(scan_range_annulus(0.5, 4.0), Err(Error::WindowTooSmall(_))));
        assert!(count_annulus(0.5, 4.0, 1e-12).is_err());
    }

    #[test]
    fn rejects_bad_variant_and_parameters() {
        assert!(band0_annulus(0.5, 40, 0.01, ProblemVariant::FullLine).is_err());
        assert!(QuasiMode::new(0, 0.01).is_err());
        assert!(QuasiMode::new(5, -1.0).is_err());
    }
}
