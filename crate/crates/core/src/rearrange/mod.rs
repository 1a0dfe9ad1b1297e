//! Distribution function, decreasing rearrangement and Schwarz
//! symmetrization.
//!
//! In the discrete model `u*` is the list of cell values sorted
//! nonincreasingly, each occupying an interval of length `h^n`. This is
//! exactly the `inf{t : μ(t) <= s}` rearrangement of the piecewise-constant
//! function, so equimeasurability and `L^p` norms are preserved exactly.
//! Signs are kept: rearrangements of sign-changing functions take negative
//! values.

mod file;
mod profile;
mod radial;

pub use file::{parse_profile, read_profile, render_profile, write_profile};
pub use profile::{LinearProfile, StepProfile};
pub use radial::{RadialFunction, SHELL_THICKNESS_CELLS};

use crate::grid::GridFunction;

/// `μ(t) = |{u > t}|`, counted in cells.
pub fn distribution(u: &GridFunction, t: f64) -> f64 {
    let count = u.values().iter().filter(|&&v| v > t).count();
    count as f64 * u.domain().cell_volume()
}

/// Cell values sorted nonincreasingly. Ties keep cell order (stable sort).
pub fn sorted_values(u: &GridFunction) -> Vec<f64> {
    let mut v = u.values().to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `u*` as a step profile with one interval of length `h^n` per cell.
pub fn decreasing_rearrangement(u: &GridFunction) -> StepProfile {
    StepProfile::uniform(sorted_values(u), u.domain().cell_volume())
        .expect("a domain has at least one cell")
}

/// `ũ`: the rearrangement placed on the ball of measure `|Ω|`.
pub fn schwarz(u: &GridFunction) -> RadialFunction {
    RadialFunction::new(
        crate::grid::BallDomain::of(u.domain()),
        decreasing_rearrangement(u),
        u.h(),
    )
    .expect("ball and profile share the measure")
}

/// `(v*)⁺`, which equals `(v⁺)*`.
pub fn positive_part(p: &StepProfile) -> StepProfile {
    p.map(|v| v.max(0.0))
}

/// `s ↦ (v*)⁻(|Ω| - s)`, which equals `(v⁻)*`.
pub fn negative_part_reflected(p: &StepProfile) -> StepProfile {
    let m = p.measure();
    let breaks: Vec<f64> = p.breaks().iter().rev().map(|&b| m - b).collect();
    let values: Vec<f64> = p.values().iter().rev().map(|&v| (-v).max(0.0)).collect();
    // m - m is exactly 0 and m - 0 is exactly m
    StepProfile::new(breaks, values).expect("reflection keeps breakpoints increasing")
}

/// `u*(|Ω|/2)`, the level splitting the domain into halves.
pub fn median_level(p: &StepProfile) -> f64 {
    p.eval(0.5 * p.measure())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::{Domain, GridFunction};

    fn line(values: &[f64]) -> GridFunction {
        let d = Arc::new(
            crate::make_domain(&crate::DomainSpec::Box {
                lower: vec![0.0],
                upper: vec![values.len() as f64],
                cells: vec![values.len()],
            })
            .unwrap(),
        );
        GridFunction::new(d, values.to_vec()).unwrap()
    }

    /// `inf{t ∈ values ∪ {-∞}: μ(t) <= s}` by brute force over candidate t.
    fn inf_formula(u: &GridFunction, s: f64) -> f64 {
        let mut cands: Vec<f64> = u.values().to_vec();
        cands.sort_by(f64::total_cmp);
        cands
            .into_iter()
            .find(|&t| distribution(u, t) <= s)
            .expect("the maximum always qualifies")
    }

    #[test]
    fn constant_distribution() {
        let d = Arc::new(Domain::unit_box(2, 4).unwrap());
        let u = GridFunction::constant(d, 2.0).unwrap();
        assert_eq!(distribution(&u, 1.999), 1.0);
        assert_eq!(distribution(&u, 2.0), 0.0);
        let p = decreasing_rearrangement(&u);
        assert!(p.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn counting_distribution() {
        let u = line(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(distribution(&u, 2.5), 2.0);
    }

    #[test]
    fn sorting_examples() {
        let p = decreasing_rearrangement(&line(&[3.0, 1.0, 2.0]));
        assert_eq!(p.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(p.breaks(), &[0.0, 1.0, 2.0, 3.0]);
        let q = decreasing_rearrangement(&line(&[2.0, -1.0, 0.0, 5.0]));
        assert_eq!(q.values(), &[5.0, 2.0, 0.0, -1.0]);
    }

    #[test]
    fn matches_inf_formula_everywhere() {
        let u = line(&[0.3, -2.0, 0.3, 7.0, 1.5, -2.0, 0.0]);
        let p = decreasing_rearrangement(&u);
        let m = p.measure();
        for k in 0..=700 {
            let s = m * k as f64 / 700.0;
            if s < m {
                assert_eq!(p.eval(s), inf_formula(&u, s), "s = {s}");
            }
        }
    }

    #[test]
    fn part_examples() {
        let p = StepProfile::uniform(vec![2.0, -1.0], 1.0).unwrap();
        assert_eq!(positive_part(&p).values(), &[2.0, 0.0]);
        assert_eq!(negative_part_reflected(&p).values(), &[1.0, 0.0]);
        let nonneg = StepProfile::uniform(vec![3.0, 1.0, 0.0], 0.5).unwrap();
        assert!(negative_part_reflected(&nonneg).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn median_examples() {
        let p = StepProfile::uniform(vec![5.0, 2.0, 0.0, -1.0], 1.0).unwrap();
        assert_eq!(median_level(&p), 0.0);
        let c = StepProfile::uniform(vec![4.5; 6], 0.25).unwrap();
        assert_eq!(median_level(&c), 4.5);
        // exactly half the cells above 7
        let u = line(&[9.0, 1.0, 8.0, 2.0, 7.5, 3.0]);
        assert!(median_level(&decreasing_rearrangement(&u)) <= 7.0);
    }

    #[test]
    fn negative_part_analogue_of_truncation_identity_fails() {
        // (u - h)⁻ rearranged is not the negative part of (u - h) rearranged
        let u = line(&[2.0, -1.0, 0.5, -3.0]);
        let direct = decreasing_rearrangement(&u.map(|v| (-v).max(0.0)).unwrap());
        let via_parts = decreasing_rearrangement(&u).map(|v| (-v).max(0.0));
        assert_ne!(direct.values(), via_parts.values());
    }
}
