use crate::error::{Error, Result};
use crate::geometry::{radial_gradient_integral, radial_power_energy};
use crate::grid::{BallDomain, GridFunction};
use crate::numeric::csum;
use crate::rearrange::{LinearProfile, StepProfile};

use super::NFunction;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::out_of_range("lambda", format!("{lambda} is not positive")))
    }
}

/// `∫_Ω A(|u|/λ) dx` as a midpoint sum; `+∞` when `A` overflows.
pub fn modular(u: &GridFunction, a: &NFunction, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let vol = u.domain().cell_volume();
    Ok(csum(u.values().iter().map(|v| a.eval(v.abs() / lambda))) * vol)
}

/// `∫_0^{|Ω|} A(|p(s)|/λ) ds`, exact per interval.
pub fn modular_profile(p: &StepProfile, a: &NFunction, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(csum(p.intervals().map(|(s0, s1, v)| a.eval(v.abs() / lambda) * (s1 - s0))))
}

/// `∫ A(|Dũ|/λ) dx` over `{s_lo ≤ c_n|x|^n ≤ s_hi}` for the radial
/// function with linear profile `p`. Closed form for power `A`,
/// graded Gauss-Legendre quadrature otherwise.
pub fn modular_radial_gradient(
    p: &LinearProfile,
    ball: &BallDomain,
    s_lo: f64,
    s_hi: f64,
    a: &NFunction,
    lambda: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    match a.power_exponent() {
        Some(q) => Ok(radial_power_energy(p, ball, s_lo, s_hi, q)? / lambda.powf(q)),
        None => radial_gradient_integral(p, ball, s_lo, s_hi, |g| a.eval(g / lambda)),
    }
}

/// `‖u‖_A = inf{λ > 0 : ∫ A(|u|/λ) ≤ 1}` with its final bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuxemburgNorm {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Modular at `value`; at most 1 and close to it unless the norm is 0.
    pub modular: f64,
}

/// Relative bracket width at which bisection stops.
pub const LUXEMBURG_TOL: f64 = 1e-10;
const MAX_ITER: usize = 200;

/// Bisection on the nonincreasing function `modular_at` for the smallest
/// `λ` with modular at most 1, starting from the scale `seed > 0`.
/// `zero` signals the zero function, whose norm is 0.
pub fn luxemburg_by_bisection(
    zero: bool,
    seed: f64,
    modular_at: impl Fn(f64) -> Result<f64>,
) -> Result<LuxemburgNorm> {
    if zero {
        return Ok(LuxemburgNorm {
            value: 0.0,
            lo: 0.0,
            hi: 0.0,
            modular: 0.0,
        });
    }
    let seed = if seed > 0.0 && seed.is_finite() { seed } else { 1.0 };
    let mut hi = seed;
    let mut m_hi = modular_at(hi)?;
    while !(m_hi <= 1.0) {
        hi *= 2.0;
        m_hi = modular_at(hi)?;
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if modular_at(lo)? > 1.0 {
            break;
        }
        hi = lo;
    }
    m_hi = modular_at(hi)?;
    for _ in 0..MAX_ITER {
        if hi - lo <= LUXEMBURG_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let m = modular_at(mid)?;
        if m <= 1.0 {
            hi = mid;
            m_hi = m;
        } else {
            lo = mid;
        }
    }
    Ok(LuxemburgNorm {
        value: hi,
        lo,
        hi,
        modular: m_hi,
    })
}

/// Luxemburg norm of a grid function, seeded at the mean of `|u|`.
pub fn luxemburg_norm(u: &GridFunction, a: &NFunction) -> Result<LuxemburgNorm> {
    let zero = u.values().iter().all(|&v| v == 0.0);
    let seed = u.lp_norm(1.0) / u.domain().measure();
    luxemburg_by_bisection(zero, seed, |l| modular(u, a, l))
}

/// Luxemburg norm of `|Dũ|` over a shell of `Ω̃`.
pub fn luxemburg_norm_radial_gradient(
    p: &LinearProfile,
    ball: &BallDomain,
    s_lo: f64,
    s_hi: f64,
    a: &NFunction,
) -> Result<LuxemburgNorm> {
    let zero = p.pieces().all(|(x, y, m)| m == 0.0 || y <= s_lo || x >= s_hi);
    let seed = radial_power_energy(p, ball, s_lo, s_hi, 1.0)? / (s_hi - s_lo);
    luxemburg_by_bisection(zero, seed, |l| modular_radial_gradient(p, ball, s_lo, s_hi, a, l))
}

/// Result of checking `A(mean g) ≤ mean A(g)` on groups of cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCheck {
    pub groups: usize,
    /// Largest `A(mean) - mean(A)`, relative to `mean(A)`.
    pub worst_excess: f64,
    pub holds: bool,
}

/// Groups cells by the gaps between consecutive thresholds of `u` and
/// checks Jensen's inequality for `A` applied to `g` on each group.
pub fn jensen_check(u: &GridFunction, g: &GridFunction, a: &NFunction, thresholds: &[f64]) -> Result<JensenCheck> {
    if !u.domain().same_grid(g.domain()) {
        return Err(Error::DomainMismatch);
    }
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); thresholds.len() + 1];
    for (&v, &w) in u.values().iter().zip(g.values()) {
        let k = thresholds.partition_point(|&t| t <= v);
        groups[k].push(w.abs());
    }
    let mut out = JensenCheck {
        groups: 0,
        worst_excess: f64::NEG_INFINITY,
        holds: true,
    };
    for grp in groups.iter().filter(|g| !g.is_empty()) {
        out.groups += 1;
        let k = grp.len() as f64;
        let mean = csum(grp.iter().copied()) / k;
        let mean_a = csum(grp.iter().map(|&x| a.eval(x))) / k;
        let excess = (a.eval(mean) - mean_a) / mean_a.max(f64::MIN_POSITIVE);
        out.worst_excess = out.worst_excess.max(excess);
        if excess > 1e-12 {
            out.holds = false;
        }
    }
    Ok(out)
}
