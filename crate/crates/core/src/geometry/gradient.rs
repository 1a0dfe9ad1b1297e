use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::numeric::csum;

/// Finite-difference gradient, `n` components per cell, cell-major.
///
/// Central differences where both neighbors along an axis are in the
/// domain, one-sided where only one is, zero where neither is. No ghost
/// cells: `u` is not assumed to vanish outside the mask.
pub fn gradient(u: &GridFunction) -> Result<Vec<f64>> {
    let d = u.domain();
    if d.shape().iter().any(|&k| k < 2) {
        return Err(Error::AxisTooShort);
    }
    let n = d.dim();
    let h = d.h();
    let v = u.values();
    let mut g = vec![0.0; n * d.len()];
    for i in 0..d.len() {
        for axis in 0..n {
            let fwd = d.neighbor(i, axis, true);
            let bwd = d.neighbor(i, axis, false);
            g[i * n + axis] = match (bwd, fwd) {
                (Some(b), Some(f)) => (v[f] - v[b]) / (2.0 * h),
                (None, Some(f)) => (v[f] - v[i]) / h,
                (Some(b), None) => (v[i] - v[b]) / h,
                (None, None) => 0.0,
            };
        }
    }
    Ok(g)
}

/// `|Du|` per cell.
pub fn gradient_magnitude(u: &GridFunction) -> Result<GridFunction> {
    let n = u.domain().dim();
    let g = gradient(u)?;
    let mags = g.chunks(n).map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    GridFunction::new(u.domain().clone(), mags)
}

/// `∫_Ω |Du|² dx` as a midpoint sum.
pub fn dirichlet_energy(u: &GridFunction) -> Result<f64> {
    let n = u.domain().dim();
    let g = gradient(u)?;
    let vol = u.domain().cell_volume();
    Ok(csum(g.chunks(n).map(|c| c.iter().map(|x| x * x).sum::<f64>())) * vol)
}

/// `‖Du‖_p` as a midpoint sum.
pub fn gradient_lp_norm(u: &GridFunction, p: f64) -> Result<f64> {
    Ok(gradient_magnitude(u)?.lp_norm(p))
}
