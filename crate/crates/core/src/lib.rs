//! Band-function toolkit for the magnetic Laplacian on a strip and an annulus
//! with mixed Dirichlet–Neumann boundary conditions.
//!
//! Separating variables reduces the 2D magnetic operator to families of 1D
//! fiber operators indexed by an integer angular momentum. This crate solves
//! those fibers with a Sturm-sequence tridiagonal solver (cross-checked by a
//! Prüfer shooting oracle), counts ground band values below the lowest Landau
//! level h, and compares the counts against the closed-form semiclassical
//! asymptotics.

pub mod annulus;
pub mod cli;
pub mod error;
pub mod halfline;
pub mod predictions;
pub mod shooting;
pub mod strip;
pub mod svg;
pub mod tridiag;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    make_fiber_problem, BoundaryCondition, BoundaryPair, CountResult, FiberProblem, Geometry, Grid, Potential,
    ProblemVariant, SpectrumResult, Weight,
};
