//! Small numerical helpers shared by the energy, norm and search code.

use std::f64::consts::PI;

/// Neumaier compensated accumulator.
///
/// Energy sums over a few hundred thousand cells lose several digits with
/// naive summation, which matters when a margin is close to zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if !t.is_finite() {
            self.sum = t;
            return;
        }
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if !self.sum.is_finite() {
            return self.sum;
        }
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn csum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `Γ(m/2)` for a positive integer `m`, via `Γ(x + 1) = x Γ(x)`.
pub fn gamma_half(m: usize) -> f64 {
    assert!(m > 0, "gamma_half needs a positive argument");
    let (mut x, mut g) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = m as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in `n` dimensions, `π^(n/2) / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n + 2)
}

/// The isoperimetric factor `n c_n^{1/n}`: a ball of volume `V` has
/// perimeter `n c_n^{1/n} V^{1-1/n}`.
pub fn isoperimetric_factor(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n).powf(1.0 / n as f64)
}

/// Mean of `‖ν‖₁` over unit vectors `ν` uniformly distributed on the sphere.
///
/// Counting voxel faces crossed by a hyperplane with normal `ν` measures
/// `‖ν‖₁` times its area, so this is the orientation-averaged bias of face
/// counting.
pub fn mean_l1_norm_of_unit_normal(n: usize) -> f64 {
    if n == 1 {
        return 1.0;
    }
    // E|ν₁| = Γ(n/2) / (√π Γ((n+1)/2))
    n as f64 * gamma_half(n) / (PI.sqrt() * gamma_half(n + 1))
}

/// Multiplier converting a raw face count into an isotropic surface estimate.
pub fn face_calibration(n: usize) -> f64 {
    1.0 / mean_l1_norm_of_unit_normal(n)
}

/// Sharp constant `S_n` in `‖f‖_{2n/(n-2)} ≤ S_n ‖Df‖₂` on `ℝⁿ`, `n ≥ 3`
/// (Aubin and Talenti).
pub fn sobolev_constant(n: usize) -> Option<f64> {
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let ratio = gamma_half(2 * n) / gamma_half(n);
    Some((PI * nf * (nf - 2.0)).sqrt().recip() * ratio.powf(1.0 / nf))
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre8(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        acc += w * (f(c - r * x) + f(c + r * x));
    }
    acc * r
}

/// Integral of a function that may have an algebraic endpoint singularity
/// at the left end when `a == 0`: splits `[a, b]` into subintervals with
/// bounded endpoint ratio before applying [`gauss_legendre8`].
pub fn integrate_graded(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    if a <= 0.0 {
        let mut hi = b;
        while hi > b * 1e-14 {
            let lo = hi * 0.5;
            acc.add(gauss_legendre8(lo, hi, &f));
            hi = lo;
        }
        return acc.value();
    }
    let mut lo = a;
    while lo < b {
        let hi = (lo * 1.5).min(b);
        acc.add(gauss_legendre8(lo, hi, &f));
        lo = hi;
    }
    acc.value()
}

/// Shortest decimal that round-trips, switching to exponent form for very
/// large or small magnitudes.
pub fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_volumes_match_known_values() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn mean_l1_norm_known_dimensions() {
        assert!((mean_l1_norm_of_unit_normal(2) - 4.0 / PI).abs() < 1e-15);
        assert!((mean_l1_norm_of_unit_normal(3) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn sobolev_constant_three_dimensions() {
        // (3π)^{-1/2} (2/Γ(3/2))^{1/3}
        let expected = (3.0 * PI).sqrt().recip() * (4.0 / PI.sqrt()).powf(1.0 / 3.0);
        assert!((sobolev_constant(3).unwrap() - expected).abs() < 1e-14);
        assert!(sobolev_constant(2).is_none());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut v = vec![1.0];
        v.extend(std::iter::repeat_n(1e-16, 10_000));
        let s = csum(v.iter().copied());
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
        assert_eq!(csum([1.0, f64::INFINITY, 2.0]), f64::INFINITY);
    }

    #[test]
    fn graded_quadrature_handles_sqrt_singularity() {
        // ∫₀¹ √s ds = 2/3
        let v = integrate_graded(0.0, 1.0, f64::sqrt);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let w = integrate_graded(0.5, 7.0, |s| s * s);
        assert!((w - (343.0 - 0.125) / 3.0).abs() < 1e-10);
    }

    #[test]
    fn fmt_real_round_trips() {
        for x in [0.1, 1e-9, 3.5e20, -2.0, 0.0, f64::INFINITY, 1.0 / 3.0] {
            let s = fmt_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
