//! Measure-theoretic rearrangements of grid-sampled functions.
//!
//! The crate computes the distribution function `μ(t) = |{u > t}|`, the
//! decreasing rearrangement `u*(s) = inf{t : μ(t) <= s}` and the Schwarz
//! symmetrization `ũ(x) = u*(c_n |x|^n)` of functions sampled on uniform
//! voxel grids, and checks Polya-Szego type gradient estimates for
//! functions that need not vanish on the boundary: global estimates with
//! constants built from relative isoperimetric constants, local estimates
//! on concentric sub-balls for sign-changing functions, the uniform
//! convergence bound for rearrangements, and their Orlicz-Sobolev
//! (Luxemburg norm) versions.
//!
//! Module map:
//!
//! - [`grid`]: domains, grid functions, the `RGRID` format.
//! - [`rearrange`]: `μ`, `u*`, `ũ`, positive/negative parts, `RPROF`.
//! - [`geometry`]: gradients, energies, level-set perimeters, coarea
//!   check, isoperimetric constants `Q`, `C` and `γ`, `RCONST`.
//! - [`inequalities`]: theorem-level verifiers, counterexample runner,
//!   `RREPORT` and trace CSV.
//! - [`orlicz`]: N-functions, Luxemburg norms, Δ₂ classification and the
//!   Orlicz-Sobolev verifiers, `NFUNC`.
//! - [`fixtures`] and [`suite`]: the built-in verification battery.

pub mod error;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod inequalities;
pub mod grid;
pub mod io;
pub mod numeric;
pub mod orlicz;
pub mod rearrange;
pub mod suite;

pub use error::{Error, Result};
pub use grid::{make_domain, sample, BallDomain, Domain, DomainKind, DomainSpec, GridFunction};
pub use rearrange::{decreasing_rearrangement, distribution, schwarz, LinearProfile, RadialFunction, StepProfile};
pub use inequalities::{InequalityReport, Verdict};
