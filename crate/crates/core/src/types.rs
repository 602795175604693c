//! Shared domain vocabulary: geometries, boundary conditions, fiber problems,
//! grids, and result records used by every solver and model module.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cross-section geometry of the 2D domain after separating variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// Periodic strip of circumference 2π and height `l`; fibers live on (0, l).
    Strip { l: f64 },
    /// Annulus with inner radius `r_inner` in (0, 1) and outer radius 1;
    /// fibers live on (r_inner, 1) with the r dr weight.
    Annulus { r_inner: f64 },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Strip { l } => {
                if !(l > 0.0) || !l.is_finite() {
                    return Err(Error::InvalidParameter(format!("strip height must be positive, got {l}")));
                }
            }
            Geometry::Annulus { r_inner } => {
                if !(r_inner > 0.0 && r_inner < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "annulus inner radius must lie in (0,1), got {r_inner}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// One condition per endpoint: `left` at the lower endpoint, `right` at the upper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPair {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
}

impl BoundaryPair {
    pub const fn new(left: BoundaryCondition, right: BoundaryCondition) -> Self {
        Self { left, right }
    }
}

/// Measure of the underlying L² space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    Flat,
    /// Inner product ∫ · r dr. Solvers remove it exactly via the Liouville
    /// transform w = √r·u, which adds −h²/(4r²) to the potential.
    Radial,
}

/// Potential of the fiber operator, kept symbolic so solvers can resample it
/// at any grid resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    /// (t + m·h)²
    StripHarmonic,
    /// (m·h/r − r/2)²
    AnnulusRadial,
    /// (t + ξ)² with a free real shift ξ, for the half-line model operators.
    HalflineHarmonic { xi: f64 },
    /// Piecewise-linear interpolation of sampled (node, value) pairs.
    /// Exists only for test fixtures.
    Custom(Vec<(f64, f64)>),
}

/// Which realization of the fiber operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemVariant {
    /// Dirichlet at the lower endpoint, Neumann at the upper.
    MixedDN,
    /// Neumann at both endpoints.
    PureNN,
    /// Half-line oscillator with Neumann at 0, truncated far end.
    HalflineNeu,
    /// Half-line oscillator with Dirichlet at 0, truncated far end.
    HalflineDir,
    /// Whole-line oscillator, truncated at both ends.
    FullLine,
}

/// A 1D Schrödinger eigenproblem −h²u'' + V u (with measure `weight`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberProblem {
    pub interval: (f64, f64),
    pub h: f64,
    pub m: i64,
    pub potential: Potential,
    pub weight: Weight,
    pub bc: BoundaryPair,
    /// Set when the interval is a numerical truncation of an unbounded domain.
    pub truncated: bool,
}

/// Truncation half-width beyond the well center, in units of √h. The lowest
/// level's turning points sit at distance √h, so the cut error is O(e^{−144}).
pub const TRUNCATION_WIDTHS: f64 = 12.0;

impl FiberProblem {
    /// Rescaled momentum ξ = m·h; computed on demand, never stored.
    pub fn xi(&self) -> f64 {
        match self.potential {
            Potential::HalflineHarmonic { xi } => xi,
            _ => self.m as f64 * self.h,
        }
    }

    /// Potential value at a point of the interval (before any measure transform).
    pub fn potential_at(&self, t: f64) -> f64 {
        match &self.potential {
            Potential::StripHarmonic => {
                let s = t + self.m as f64 * self.h;
                s * s
            }
            Potential::AnnulusRadial => {
                let s = self.m as f64 * self.h / t - t / 2.0;
                s * s
            }
            Potential::HalflineHarmonic { xi } => {
                let s = t + xi;
                s * s
            }
            Potential::Custom(samples) => {
                if samples.is_empty() {
                    return 0.0;
                }
                if t <= samples[0].0 {
                    return samples[0].1;
                }
                if t >= samples[samples.len() - 1].0 {
                    return samples[samples.len() - 1].1;
                }
                let idx = samples.partition_point(|&(x, _)| x <= t);
                let (x0, v0) = samples[idx - 1];
                let (x1, v1) = samples[idx];
                if x1 == x0 {
                    v0
                } else {
                    v0 + (v1 - v0) * (t - x0) / (x1 - x0)
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!("h must be positive, got {}", self.h)));
        }
        let (a, b) = self.interval;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("interval must be finite with a < b, got ({a}, {b})")));
        }
        if self.weight == Weight::Radial && a <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radial-weight interval must stay in (0, ∞), got lower endpoint {a}"
            )));
        }
        Ok(())
    }
}

/// Builds a fiber problem for a geometry, momentum, and operator variant.
///
/// Line and half-line variants resolve their truncation window here:
/// the interval covers the well center at distance `TRUNCATION_WIDTHS·√h`
/// and `truncated` is set so the far (artificial) ends carry Dirichlet.
pub fn make_fiber_problem(geometry: Geometry, m: i64, h: f64, variant: ProblemVariant) -> Result<FiberProblem> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    geometry.validate()?;
    use BoundaryCondition::{Dirichlet, Neumann};
    let xi = m as f64 * h;
    let w = TRUNCATION_WIDTHS * h.sqrt();
    let problem = match (geometry, variant) {
        (Geometry::Strip { l }, ProblemVariant::MixedDN) => FiberProblem {
            interval: (0.0, l),
            h,
            m,
            potential: Potential::StripHarmonic,
            weight: Weight::Flat,
            bc: BoundaryPair::new(Dirichlet, Neumann),
            truncated: false,
        },
        (Geometry::Strip { l }, ProblemVariant::PureNN) => FiberProblem {
            interval: (0.0, l),
            h,
            m,
            potential: Potential::StripHarmonic,
            weight: Weight::Flat,
            bc: BoundaryPair::new(Neumann, Neumann),
            truncated: false,
        },
        (Geometry::Annulus { r_inner }, ProblemVariant::MixedDN) => FiberProblem {
            interval: (r_inner, 1.0),
            h,
            m,
            potential: Potential::AnnulusRadial,
            weight: Weight::Radial,
            bc: BoundaryPair::new(Dirichlet, Neumann),
            truncated: false,
        },
        (Geometry::Annulus { r_inner }, ProblemVariant::PureNN) => FiberProblem {
            interval: (r_inner, 1.0),
            h,
            m,
            potential: Potential::AnnulusRadial,
            weight: Weight::Radial,
            bc: BoundaryPair::new(Neumann, Neumann),
            truncated: false,
        },
        (Geometry::Strip { .. }, ProblemVariant::HalflineNeu) => FiberProblem {
            interval: (0.0, (-xi).max(0.0) + w),
            h,
            m,
            potential: Potential::HalflineHarmonic { xi },
            weight: Weight::Flat,
            bc: BoundaryPair::new(Neumann, Dirichlet),
            truncated: true,
        },
        (Geometry::Strip { .. }, ProblemVariant::HalflineDir) => FiberProblem {
            interval: (0.0, (-xi).max(0.0) + w),
            h,
            m,
            potential: Potential::HalflineHarmonic { xi },
            weight: Weight::Flat,
            bc: BoundaryPair::new(Dirichlet, Dirichlet),
            truncated: true,
        },
        (Geometry::Strip { .. }, ProblemVariant::FullLine) => FiberProblem {
            interval: (-xi - w, -xi + w),
            h,
            m,
            potential: Potential::StripHarmonic,
            weight: Weight::Flat,
            bc: BoundaryPair::new(Dirichlet, Dirichlet),
            truncated: true,
        },
        (Geometry::Annulus { .. }, v) => {
            return Err(Error::InvalidParameter(format!(
                "variant {v:?} requires a Strip geometry, got Annulus"
            )));
        }
    };
    problem.validate()?;
    Ok(problem)
}

/// Uniform grid with `n` interior nodes on a problem interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("grid needs at least 3 interior nodes, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn spacing(&self, interval: (f64, f64)) -> f64 {
        (interval.1 - interval.0) / (self.n + 1) as f64
    }

    /// Interior nodes, strictly inside the interval.
    pub fn nodes(&self, interval: (f64, f64)) -> Vec<f64> {
        let d = self.spacing(interval);
        (1..=self.n).map(|i| interval.0 + i as f64 * d).collect()
    }
}

/// Extracted eigenvalues with per-eigenvalue discretization-error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub grid_sizes_used: Vec<usize>,
    pub problem: FiberProblem,
}

/// Outcome of one counting experiment over a momentum window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub h: f64,
    pub geometry: Geometry,
    /// Inclusive integer window of scanned momenta.
    pub m_window: (i64, i64),
    /// Ground band value per scanned momentum.
    pub ground_values: BTreeMap<i64, f64>,
    /// Comparator verdict per momentum: −1 resolved below h, +1 resolved
    /// above, 0 unresolved (member of `ambiguous_m`).
    pub labels: BTreeMap<i64, i8>,
    /// Number of momenta with λ₀ strictly below h. Resolved momenta are
    /// counted directly; unresolved runs are counted by the bracketing rule
    /// (full run between below-threshold neighbors, half a run across a
    /// single transition).
    pub count: usize,
    /// Leading term predicted by the closed-form asymptotics.
    pub predicted: f64,
    pub ratio: f64,
    /// Momenta whose comparator diff fell inside the tolerance band; these
    /// enter `count` only through the bracketing rule.
    pub ambiguous_m: Vec<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mixed_dn_strip_problem() {
        let p = make_fiber_problem(Geometry::Strip { l: 1.0 }, -40, 0.01, ProblemVariant::MixedDN).unwrap();
        assert_eq!(p.interval, (0.0, 1.0));
        assert_eq!(p.bc, BoundaryPair::new(BoundaryCondition::Dirichlet, BoundaryCondition::Neumann));
        assert_eq!(p.weight, Weight::Flat);
        assert_eq!(p.xi(), -0.4);
        // potential (t + mh)² with mh = −0.4
        let t = 0.3;
        assert!((p.potential_at(t) - (t - 0.4f64).powi(2)).abs() < 1e-15);
        assert!(!p.truncated);
    }

    #[test]
    fn mixed_dn_annulus_problem() {
        let p = make_fiber_problem(Geometry::Annulus { r_inner: 0.5 }, 30, 0.01, ProblemVariant::MixedDN).unwrap();
        assert_eq!(p.interval, (0.5, 1.0));
        assert_eq!(p.weight, Weight::Radial);
        assert_eq!(p.bc, BoundaryPair::new(BoundaryCondition::Dirichlet, BoundaryCondition::Neumann));
        let r = 0.7;
        let expect = (30.0 * 0.01 / r - r / 2.0f64).powi(2);
        assert!((p.potential_at(r) - expect).abs() < 1e-15);
    }

    #[test]
    fn full_line_truncation_marker() {
        let p = make_fiber_problem(Geometry::Strip { l: 1.0 }, 0, 1.0, ProblemVariant::FullLine).unwrap();
        assert!(p.truncated);
        assert_eq!(p.weight, Weight::Flat);
        assert!((p.potential_at(0.7) - 0.49).abs() < 1e-15);
        assert_eq!(p.interval, (-12.0, 12.0));
        assert_eq!(p.bc, BoundaryPair::new(BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_fiber_problem(Geometry::Strip { l: 1.0 }, 0, 0.0, ProblemVariant::MixedDN).is_err());
        assert!(make_fiber_problem(Geometry::Strip { l: 1.0 }, 0, -1.0, ProblemVariant::MixedDN).is_err());
        assert!(make_fiber_problem(Geometry::Strip { l: -1.0 }, 0, 1.0, ProblemVariant::MixedDN).is_err());
        assert!(make_fiber_problem(Geometry::Annulus { r_inner: 1.5 }, 0, 1.0, ProblemVariant::MixedDN).is_err());
        // variant/geometry mismatch
        assert!(make_fiber_problem(Geometry::Annulus { r_inner: 0.5 }, 0, 1.0, ProblemVariant::FullLine).is_err());
        assert!(make_fiber_problem(Geometry::Annulus { r_inner: 0.5 }, 0, 1.0, ProblemVariant::HalflineNeu).is_err());
    }

    #[test]
    fn grid_nodes_strictly_interior() {
        let g = Grid::new(5).unwrap();
        let nodes = g.nodes((0.0, 1.0));
        assert_eq!(nodes.len(), 5);
        assert!(nodes[0] > 0.0 && nodes[4] < 1.0);
        for w in nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(Grid::new(2).is_err());
    }

    proptest! {
        #[test]
        fn potential_matches_direct_arithmetic(m in -200i64..200, h in 1e-3f64..1.0, t in 0.05f64..1.0) {
            let strip = make_fiber_problem(Geometry::Strip { l: 1.0 }, m, h, ProblemVariant::MixedDN).unwrap();
            let expect = (t + m as f64 * h).powi(2);
            prop_assert!((strip.potential_at(t) - expect).abs() <= 1e-12 * (1.0 + expect));
            prop_assert!(strip.potential_at(t).is_finite());

            let ann = make_fiber_problem(Geometry::Annulus { r_inner: 0.3 }, m, h, ProblemVariant::MixedDN).unwrap();
            let expect = (m as f64 * h / t - t / 2.0).powi(2);
            prop_assert!((ann.potential_at(t) - expect).abs() <= 1e-12 * (1.0 + expect));
        }

        #[test]
        fn serialization_round_trip(m in -500i64..500, h in 1e-4f64..2.0, l in 0.1f64..4.0) {
            let p = make_fiber_problem(Geometry::Strip { l }, m, h, ProblemVariant::MixedDN).unwrap();
            let json = serde_json::to_string(&p).unwrap();
            let back: FiberProblem = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(p, back);
        }
    }
}
