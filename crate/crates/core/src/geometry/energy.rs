//! Gradient integrals of radial functions through the volume coordinate.
//!
//! For `ũ(x) = u*(c_n|x|^n)` one has `|Dũ| = n c_n^{1/n} s^{1-1/n} |u*'(s)|`
//! and `dx = ds`, so integrals over shells of `Ω̃` become one-dimensional
//! integrals over `s`.

use crate::error::{Error, Result};
use crate::grid::BallDomain;
use crate::numeric::{csum, integrate_graded, isoperimetric_factor};
use crate::rearrange::LinearProfile;

fn check_range(ball: &BallDomain, s_lo: f64, s_hi: f64) -> Result<()> {
    if !(0.0 <= s_lo && s_lo < s_hi && s_hi <= ball.measure()) {
        return Err(Error::out_of_range(
            "s",
            format!("[{s_lo}, {s_hi}] not inside [0, {}]", ball.measure()),
        ));
    }
    Ok(())
}

fn clipped_pieces(
    p: &LinearProfile,
    s_lo: f64,
    s_hi: f64,
) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    p.pieces().filter_map(move |(a, b, m)| {
        let (a, b) = (a.max(s_lo), b.min(s_hi));
        (b > a && m != 0.0).then_some((a, b, m))
    })
}

/// `∫ |Dũ|^q` over the shell `s_lo ≤ c_n|x|^n ≤ s_hi`, exact per linear piece.
pub fn radial_power_energy(
    p: &LinearProfile,
    ball: &BallDomain,
    s_lo: f64,
    s_hi: f64,
    q: f64,
) -> Result<f64> {
    check_range(ball, s_lo, s_hi)?;
    let n = ball.dim() as f64;
    let e = q * (1.0 - 1.0 / n) + 1.0;
    let k = isoperimetric_factor(ball.dim()).powf(q);
    let sum = csum(clipped_pieces(p, s_lo, s_hi).map(|(a, b, m)| {
        m.abs().powf(q) * (b.powf(e) - a.powf(e)) / e
    }));
    Ok(k * sum)
}

/// `∫_{Ω̃} |Dũ|²` restricted to `s ∈ [s_lo, s_hi]`.
pub fn radial_energy(p: &LinearProfile, ball: &BallDomain, s_lo: f64, s_hi: f64) -> Result<f64> {
    radial_power_energy(p, ball, s_lo, s_hi, 2.0)
}

/// Energy of the increasing arrangement `u(x) = u*(|Ω| - c_n|x|^n)`: the
/// weight `s^{2-2/n}` is replaced by `(|Ω| - s)^{2-2/n}`.
pub fn mirrored_radial_energy(
    p: &LinearProfile,
    ball: &BallDomain,
    s_lo: f64,
    s_hi: f64,
) -> Result<f64> {
    check_range(ball, s_lo, s_hi)?;
    let m = ball.measure();
    let e = 3.0 - 2.0 / ball.dim() as f64;
    let k = isoperimetric_factor(ball.dim()).powi(2);
    let sum = csum(clipped_pieces(p, s_lo, s_hi).map(|(a, b, sl)| {
        sl * sl * ((m - a).powf(e) - (m - b).powf(e)) / e
    }));
    Ok(k * sum)
}

/// `∫ g(|Dũ|)` over the shell `s_lo ≤ c_n|x|^n ≤ s_hi`, by graded
/// Gauss-Legendre quadrature on each linear piece.
pub fn radial_gradient_integral(
    p: &LinearProfile,
    ball: &BallDomain,
    s_lo: f64,
    s_hi: f64,
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    check_range(ball, s_lo, s_hi)?;
    let k = isoperimetric_factor(ball.dim());
    let e = 1.0 - 1.0 / ball.dim() as f64;
    Ok(csum(clipped_pieces(p, s_lo, s_hi).map(|(a, b, m)| {
        integrate_graded(a, b, |s| g(k * m.abs() * s.powf(e)))
    })))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn sqrt_profile(m: f64, k: usize) -> LinearProfile {
        // nodes graded toward s = m
        let mut nodes: Vec<f64> = (0..=k).map(|i| m * (1.0 - 0.5f64.powf(i as f64 / 16.0))).collect();
        nodes.push(m);
        LinearProfile::from_fn(m, nodes, |s| (m - s).sqrt()).unwrap()
    }

    #[test]
    fn constant_profile_has_zero_energy() {
        let ball = BallDomain::with_measure(2, PI).unwrap();
        let p = LinearProfile::new(vec![0.5, 1.0, 2.0], vec![1.0; 3], PI).unwrap();
        assert_eq!(radial_energy(&p, &ball, 0.0, PI).unwrap(), 0.0);
        assert_eq!(mirrored_radial_energy(&p, &ball, 0.0, PI).unwrap(), 0.0);
    }

    #[test]
    fn truncated_energy_of_sqrt_profile() {
        let ball = BallDomain::with_measure(2, PI).unwrap();
        let p = sqrt_profile(PI, 16 * 40);
        for eps in [0.5, 0.01, 1e-4] {
            let exact = PI * PI * (PI / eps).ln() - PI * PI + PI * eps;
            let got = radial_energy(&p, &ball, 0.0, PI - eps).unwrap();
            assert!((got - exact).abs() < 2e-3 * exact, "{eps}: {got} vs {exact}");
        }
    }

    #[test]
    fn mirrored_energy_of_sqrt_profile_is_finite() {
        let ball = BallDomain::with_measure(2, PI).unwrap();
        let p = sqrt_profile(PI, 16 * 40);
        let e = mirrored_radial_energy(&p, &ball, 0.0, PI).unwrap();
        assert!((e - PI * PI).abs() < 1e-3 * PI * PI, "{e}");
    }

    #[test]
    fn symmetric_profile_mirrors_to_same_energy() {
        let m = 2.0;
        let ball = BallDomain::with_measure(3, m).unwrap();
        let nodes: Vec<f64> = (0..=200).map(|i| m * i as f64 / 200.0).collect();
        let p = LinearProfile::from_fn(m, nodes, |s| (std::f64::consts::PI * s / m).cos()).unwrap();
        let a = radial_energy(&p, &ball, 0.0, m).unwrap();
        let b = mirrored_radial_energy(&p, &ball, 0.0, m).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn generic_integral_matches_closed_form() {
        let ball = BallDomain::with_measure(2, 1.3).unwrap();
        let nodes: Vec<f64> = (0..=50).map(|i| 1.3 * i as f64 / 50.0).collect();
        let p = LinearProfile::from_fn(1.3, nodes, |s| (1.3 - s).powi(2)).unwrap();
        let a = radial_energy(&p, &ball, 0.1, 1.2).unwrap();
        let b = radial_gradient_integral(&p, &ball, 0.1, 1.2, |g| g * g).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        let c = radial_power_energy(&p, &ball, 0.0, 1.3, 3.0).unwrap();
        let d = radial_gradient_integral(&p, &ball, 0.0, 1.3, |g| g.powi(3)).unwrap();
        assert!((c - d).abs() < 1e-10 * c);
    }

    #[test]
    fn range_checked() {
        let ball = BallDomain::with_measure(2, 1.0).unwrap();
        let p = LinearProfile::new(vec![0.0, 1.0], vec![1.0, 0.0], 1.0).unwrap();
        assert!(radial_energy(&p, &ball, 0.5, 1.5).is_err());
        assert!(radial_energy(&p, &ball, 0.5, 0.5).is_err());
    }
}
