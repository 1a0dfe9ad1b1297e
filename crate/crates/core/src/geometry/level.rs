//! Super-level sets `{u > t}`, their relative perimeters and boundary
//! traces, and threshold scans over all level sets of a function.
//!
//! Perimeters count grid faces between member and non-member cells. Raw
//! face counts measure the `ℓ¹` (anisotropic) perimeter `∫ ‖ν‖₁ dH`.
//! Two corrections are offered: a global factor `1/E‖ν‖₁` that is exact on
//! average over orientations (balls in particular), and a per-face factor
//! `1/‖ν‖₁` with `ν` the normalized finite-difference gradient, which is
//! also right for flat interfaces of any orientation.

use std::sync::Arc;

use crate::error::Result;
use crate::geometry::gradient;
use crate::grid::{Domain, GridFunction};
use crate::numeric::{csum, face_calibration};

/// Raw face-count measure and its orientation-calibrated counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceMeasure {
    pub raw: f64,
    pub calibrated: f64,
}

/// `{x ∈ Ω : u(x) > t}` as a cell membership mask.
#[derive(Debug, Clone)]
pub struct LevelSet {
    domain: Arc<Domain>,
    threshold: f64,
    members: Vec<bool>,
}

impl LevelSet {
    pub fn new(u: &GridFunction, t: f64) -> Self {
        LevelSet {
            domain: u.domain().clone(),
            threshold: t,
            members: u.values().iter().map(|&v| v > t).collect(),
        }
    }

    /// A set given directly by membership.
    pub fn from_members(domain: Arc<Domain>, members: Vec<bool>) -> Result<Self> {
        if members.len() != domain.len() {
            return Err(crate::Error::LengthMismatch {
                expected: domain.len(),
                found: members.len(),
            });
        }
        Ok(LevelSet {
            domain,
            threshold: f64::NAN,
            members,
        })
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.domain.cell_volume()
    }

    /// `P_Ω(E)`: interface inside `Ω` only.
    pub fn perimeter(&self) -> FaceMeasure {
        let faces = self
            .domain
            .interior_faces()
            .filter(|&(i, j, _)| self.members[i] != self.members[j])
            .count();
        let raw = faces as f64 * self.domain.face_area();
        FaceMeasure {
            raw,
            calibrated: raw * face_calibration(self.domain.dim()),
        }
    }

    /// `H_{n-1}(∂E ∩ ∂Ω)`.
    pub fn boundary_trace_measure(&self) -> FaceMeasure {
        let faces = self
            .domain
            .boundary_faces()
            .filter(|&(i, _, _)| self.members[i])
            .count();
        let raw = faces as f64 * self.domain.face_area();
        FaceMeasure {
            raw,
            calibrated: raw * boundary_calibration(&self.domain),
        }
    }
}

/// Calibration of `∂Ω` face counts: none for boxes, whose boundary is
/// axis-aligned, the orientation average otherwise.
pub fn boundary_calibration(domain: &Domain) -> f64 {
    if domain.is_full_box() {
        1.0
    } else {
        face_calibration(domain.dim())
    }
}

/// How interior faces are weighted when measuring interfaces.
#[derive(Debug, Clone, PartialEq)]
pub enum FaceWeighting {
    /// `h^{n-1}` per face: the `ℓ¹` perimeter.
    Raw,
    /// `h^{n-1} / E‖ν‖₁` per face.
    Calibrated,
    /// `h^{n-1} / ‖ν‖₁` with `ν` from the averaged gradient of the two
    /// cells, falling back to the calibrated weight where the gradient
    /// vanishes.
    GradientNormal,
    /// `h^{n-1} / ‖d‖₁` for interfaces known to be flat with unit normal `d`.
    Normal(Vec<f64>),
}

/// Sorted face and cell data answering `μ(t)`, `P_Ω{u > t}` and
/// `H_{n-1}(∂{u > t} ∩ ∂Ω)` in logarithmic time per threshold.
#[derive(Debug, Clone)]
pub struct LevelScan {
    dim: usize,
    h: f64,
    cell_volume: f64,
    values: Vec<f64>,
    // interior faces by lower and by upper endpoint value, with prefix
    // sums of the face weights
    lo: Vec<f64>,
    lo_cum: Vec<f64>,
    hi: Vec<f64>,
    hi_cum: Vec<f64>,
    bnd: Vec<f64>,
    bnd_cum: Vec<f64>,
}

fn prefix(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = crate::numeric::CompensatedSum::new();
    let mut out = vec![0.0];
    for w in weights {
        acc.add(w);
        out.push(acc.value());
    }
    out
}

fn sorted_with_prefix(mut items: Vec<(f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let cum = prefix(items.iter().map(|p| p.1));
    (items.into_iter().map(|p| p.0).collect(), cum)
}

impl LevelScan {
    /// Scan of the level sets of `u` with the given face weighting.
    pub fn new(u: &GridFunction, weighting: &FaceWeighting) -> Result<Self> {
        let d = u.domain();
        let n = d.dim();
        let area = d.face_area();
        let kappa = face_calibration(n);
        let grad = match weighting {
            FaceWeighting::GradientNormal => Some(gradient(u)?),
            _ => None,
        };
        let fixed = match weighting {
            FaceWeighting::Raw => area,
            FaceWeighting::Calibrated | FaceWeighting::GradientNormal => area * kappa,
            FaceWeighting::Normal(nu) => {
                let l2 = nu.iter().map(|c| c * c).sum::<f64>().sqrt();
                area * l2 / nu.iter().map(|c| c.abs()).sum::<f64>()
            }
        };
        let v = u.values();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (i, j, _) in d.interior_faces() {
            if v[i] == v[j] {
                continue;
            }
            let w = match &grad {
                Some(g) => {
                    let mut l1 = 0.0;
                    let mut l2 = 0.0;
                    for a in 0..n {
                        let c = 0.5 * (g[i * n + a] + g[j * n + a]);
                        l1 += c.abs();
                        l2 += c * c;
                    }
                    if l2 > 0.0 {
                        area * l2.sqrt() / l1
                    } else {
                        fixed
                    }
                }
                None => fixed,
            };
            lo.push((v[i].min(v[j]), w));
            hi.push((v[i].max(v[j]), w));
        }
        let bcal = area * boundary_calibration(d);
        let bnd: Vec<(f64, f64)> = d.boundary_faces().map(|(i, _, _)| (v[i], bcal)).collect();
        let (lo, lo_cum) = sorted_with_prefix(lo);
        let (hi, hi_cum) = sorted_with_prefix(hi);
        let (bnd, bnd_cum) = sorted_with_prefix(bnd);
        let mut values = v.to_vec();
        values.sort_by(f64::total_cmp);
        Ok(LevelScan {
            dim: n,
            h: d.h(),
            cell_volume: d.cell_volume(),
            values,
            lo,
            lo_cum,
            hi,
            hi_cum,
            bnd,
            bnd_cum,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Cell values in increasing order.
    pub fn sorted_values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        self.values.len() as f64 * self.cell_volume
    }

    /// `μ(t)`.
    pub fn measure(&self, t: f64) -> f64 {
        let below = self.values.partition_point(|&v| v <= t);
        (self.values.len() - below) as f64 * self.cell_volume
    }

    /// `P_Ω{u > t}`: faces with `lo <= t < hi`.
    pub fn perimeter(&self, t: f64) -> f64 {
        let a = self.lo.partition_point(|&v| v <= t);
        let b = self.hi.partition_point(|&v| v <= t);
        (self.lo_cum[a] - self.hi_cum[b]).max(0.0)
    }

    /// `H_{n-1}(∂{u > t} ∩ ∂Ω)`.
    pub fn trace(&self, t: f64) -> f64 {
        let k = self.bnd.partition_point(|&v| v <= t);
        self.bnd_cum[self.bnd.len()] - self.bnd_cum[k]
    }

    /// Boundary trace of the complement `{u <= t}`.
    pub fn trace_below(&self, t: f64) -> f64 {
        let k = self.bnd.partition_point(|&v| v <= t);
        self.bnd_cum[k]
    }
}

/// Distinct values of `values` in increasing order, thinned to at most
/// `cap` entries by quantile selection (always keeping both extremes).
pub fn threshold_grid(values: &[f64], cap: usize) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    if cap < 2 || v.len() <= cap {
        return v;
    }
    let m = v.len() - 1;
    let mut out: Vec<f64> = (0..cap)
        .map(|k| v[((k as f64 * m as f64) / (cap - 1) as f64).round() as usize])
        .collect();
    out.dedup();
    out
}

/// Default cap on thresholds per scan.
pub const THRESHOLD_CAP: usize = 512;

/// Both sides of `∫ f |Du| dx = ∫ dt ∫_{u=t} f dH_{n-1}`.
///
/// The left side is a cell sum. On the right, a face between cells with
/// values `a < b` lies on `{u = t}` exactly for `t ∈ [a, b)`, so the
/// `t`-integral is the sum over faces of `(b - a)` times the face weight
/// (gradient-normal corrected) times `f` averaged over the two cells.
pub fn coarea_check(u: &GridFunction, f: &GridFunction) -> Result<(f64, f64)> {
    let d = u.domain();
    if !d.same_grid(f.domain()) {
        return Err(crate::Error::DomainMismatch);
    }
    let n = d.dim();
    let g = gradient(u)?;
    let fv = f.values();
    let v = u.values();
    let lhs = csum(
        g.chunks(n)
            .zip(fv)
            .map(|(c, &w)| w * c.iter().map(|x| x * x).sum::<f64>().sqrt()),
    ) * d.cell_volume();
    let area = d.face_area();
    let kappa = face_calibration(n);
    let rhs = csum(d.interior_faces().map(|(i, j, _)| {
        let jump = (v[i] - v[j]).abs();
        if jump == 0.0 {
            return 0.0;
        }
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for a in 0..n {
            let c = 0.5 * (g[i * n + a] + g[j * n + a]);
            l1 += c.abs();
            l2 += c * c;
        }
        let w = if l2 > 0.0 { area * l2.sqrt() / l1 } else { area * kappa };
        jump * w * 0.5 * (fv[i] + fv[j])
    }));
    Ok((lhs, rhs))
}

/// Outcome of scanning `P_Ω{u > t} ≥ γ μ(t)^{1-1/n}` over thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionScan {
    pub holds: bool,
    /// Smallest `P / (γ μ^{1-1/n})` seen.
    pub worst_ratio: f64,
    /// Threshold at which `worst_ratio` occurs.
    pub worst_t: f64,
    /// Level sets checked.
    pub checked: usize,
}

/// Relative allowance for the discretization error of a level set's
/// perimeter: `2h / r`, with `r` the radius of the ball of the same measure.
pub fn perimeter_slack(dim: usize, h: f64, measure: f64) -> f64 {
    let r = (measure / crate::numeric::unit_ball_volume(dim)).powf(1.0 / dim as f64);
    (2.0 * h / r).min(1.0)
}

/// Checks the isoperimetric-type condition on every level set `{u > t}`,
/// `t > 0`: the sets `{u > 0}` and `{u > v}` for positive values `v`.
pub fn scan_condition(scan: &LevelScan, gamma: f64) -> ConditionScan {
    let n = scan.dim();
    let e = 1.0 - 1.0 / n as f64;
    let mut ts: Vec<f64> = threshold_grid(scan.sorted_values(), THRESHOLD_CAP)
        .into_iter()
        .filter(|&t| t > 0.0)
        .collect();
    ts.insert(0, 0.0);
    let mut out = ConditionScan {
        holds: true,
        worst_ratio: f64::INFINITY,
        worst_t: f64::NAN,
        checked: 0,
    };
    for t in ts {
        let mu = scan.measure(t);
        if mu == 0.0 {
            continue;
        }
        out.checked += 1;
        let need = gamma * mu.powf(e);
        let ratio = scan.perimeter(t) / need;
        if ratio < out.worst_ratio {
            out.worst_ratio = ratio;
            out.worst_t = t;
        }
        if ratio < 1.0 - perimeter_slack(n, scan.h(), mu) {
            out.holds = false;
        }
    }
    out
}

/// Outcome of comparing slopes of `u*` with `(L/γ) s^{-1+1/n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzCheck {
    pub holds: bool,
    /// Largest `(-Δu*/Δs) / ((L/γ) s^{-1+1/n})` over pieces with `s ≥ s_min`.
    pub worst_ratio: f64,
    /// Left end of the piece attaining `worst_ratio`.
    pub at: f64,
}

/// Difference quotients of a linear view of `u*` against the Lipschitz
/// bound, on `s ≥ s_min`. Each piece's mean slope is compared with the
/// bound at the piece's left end (its largest value on the piece);
/// `holds` iff every ratio is at most `factor`.
pub fn lipschitz_bound_check(
    p: &crate::rearrange::LinearProfile,
    dim: usize,
    lipschitz: f64,
    gamma: f64,
    s_min: f64,
    factor: f64,
) -> LipschitzCheck {
    let e = -1.0 + 1.0 / dim as f64;
    let mut worst = 0.0f64;
    let mut at = s_min;
    for (a, b, m) in p.pieces() {
        if b <= s_min {
            continue;
        }
        let a = a.max(s_min);
        let ratio = -m / (lipschitz / gamma * a.powf(e));
        if ratio > worst {
            worst = ratio;
            at = a;
        }
    }
    LipschitzCheck {
        holds: worst <= factor,
        worst_ratio: worst,
        at,
    }
}
