//! Smooth test functions shared by the verification battery, the
//! acceptance harness and the examples. Every fixture takes the grid
//! spacing so that refinement studies can rebuild it.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::Result;
use crate::grid::{sample, Domain, GridFunction};

fn r2(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `(1 - |x - c|²/ρ²)²₊`.
pub fn bump(x: &[f64], c: &[f64], rho: f64) -> f64 {
    (1.0 - r2(x, c) / (rho * rho)).max(0.0).powi(2)
}

/// Lipschitz constant of `a · bump(·, c, ρ)`: `8a / (3√3 ρ)`.
pub fn bump_lipschitz(a: f64, rho: f64) -> f64 {
    8.0 * a / (3.0 * 3f64.sqrt() * rho)
}

pub const RADIAL_BUMP_RADIUS: f64 = 0.8;

/// Radially decreasing bump of radius 0.8 on the unit disk.
pub fn radial_bump(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::ball(2, 1.0, h)?);
    sample(&d, |x| bump(x, &[0.0, 0.0], RADIAL_BUMP_RADIUS))
}

const TWO_BUMPS: [([f64; 2], f64, f64); 2] = [([0.3, 0.3], 0.2, 1.0), ([0.7, 0.65], 0.15, 0.8)];

/// Two disjoint bumps of different heights and radii on the unit square.
pub fn two_bumps(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    sample(&d, |x| TWO_BUMPS.iter().map(|(c, rho, a)| a * bump(x, c, *rho)).sum())
}

/// Lipschitz constant of [`two_bumps`].
pub fn two_bumps_lipschitz() -> f64 {
    TWO_BUMPS
        .iter()
        .map(|(_, rho, a)| bump_lipschitz(*a, *rho))
        .fold(0.0, f64::max)
}

/// `sin²(2πx) sin²(2πy)` on `[0, 1/2]²`, zero elsewhere in the unit square.
pub fn quadrant_bump(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    sample(&d, |x| {
        if x[0] < 0.5 && x[1] < 0.5 {
            ((2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).sin()).powi(2)
        } else {
            0.0
        }
    })
}

/// `cos(π x₁)` on the unit square.
pub fn cosine(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    sample(&d, |x| (PI * x[0]).cos())
}

/// Smooth perturbation on the unit square.
pub fn perturbation(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    sample(&d, |x| (2.0 * PI * x[0]).sin() * (PI * x[1]).cos() + 0.5 * x[1] * x[1])
}

/// `√π |x|` on the unit disk: the rearrangement `√(π - s)` of the
/// counterexample laid out increasingly.
pub fn counterexample_seed(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::ball(2, 1.0, h)?);
    sample(&d, |x| (PI * r2(x, &[0.0, 0.0])).sqrt())
}

/// `x₁` on the unit square, vanishing on the left edge.
pub fn ramp(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    sample(&d, |x| x[0])
}

/// `|x₂| (1 - |x|²)` on the unit disk, vanishing on a diameter and on the
/// boundary.
pub fn diameter_zero(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::ball(2, 1.0, h)?);
    sample(&d, |x| x[1].abs() * (1.0 - r2(x, &[0.0, 0.0])).max(0.0))
}

/// A bump in the upper half of the ball of radius 1/2 in three dimensions,
/// vanishing on the lower half.
pub fn half_ball_bump(h: f64) -> Result<GridFunction> {
    let d = Arc::new(Domain::ball(3, 0.5, h)?);
    sample(&d, |x| bump(x, &[0.0, 0.0, 0.25], 0.22))
}

/// Every two-dimensional fixture at spacing `h`, by name.
pub fn planar_fixtures(h: f64) -> Result<Vec<(&'static str, GridFunction)>> {
    Ok(vec![
        ("radial_bump", radial_bump(h)?),
        ("two_bumps", two_bumps(h)?),
        ("quadrant_bump", quadrant_bump(h)?),
        ("cosine", cosine(h)?),
        ("counterexample_seed", counterexample_seed(h)?),
        ("ramp", ramp(h)?),
        ("diameter_zero", diameter_zero(h)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_lipschitz_constant() {
        // maximum slope of (1 - r²/ρ²)² is at r = ρ/√3
        let rho = 0.3;
        let f = |r: f64| (1.0 - r * r / (rho * rho)).max(0.0).powi(2);
        let r = rho / 3f64.sqrt();
        let d = 1e-6;
        let slope = (f(r - d) - f(r + d)) / (2.0 * d);
        assert!((slope - bump_lipschitz(1.0, rho)).abs() < 1e-6);
    }

    #[test]
    fn quadrant_bump_zero_set() {
        let u = quadrant_bump(1.0 / 64.0).unwrap();
        assert_eq!(u.zero_set_measure(0.0), 0.75);
    }
}
