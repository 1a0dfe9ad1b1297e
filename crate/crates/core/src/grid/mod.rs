//! Uniform voxel domains and functions sampled at cell centers.
//!
//! Every domain is a subset of a uniform grid with isotropic spacing `h`.
//! Cells are closed cubes of side `h`, function values live at cell
//! centers and every integral in the crate is a midpoint sum over cells.

mod file;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::unit_ball_volume;

pub use file::{parse_grid, read_grid, render_grid, write_grid};

const OUTSIDE: u32 = u32::MAX;

/// How a domain was described.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Ball centered at the origin; cells whose centers lie inside are kept.
    Ball { radius: f64 },
    /// Axis-aligned box, every cell of the bounding grid is interior.
    Box,
    /// Arbitrary voxel mask.
    Mask,
}

/// Descriptor accepted by [`make_domain`].
#[derive(Debug, Clone)]
pub enum DomainSpec {
    /// Box `[lower, upper]` split into `cells[a]` cells along axis `a`. The
    /// implied spacing must agree across axes.
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
        cells: Vec<usize>,
    },
    /// Ball of `radius` centered at the origin, spacing `h`.
    Ball { dim: usize, radius: f64, h: f64 },
    /// Explicit mask over a bounding grid of `shape` cells whose lower
    /// corner is `origin`. `mask` is row-major over the bounding grid.
    Mask {
        h: f64,
        origin: Vec<f64>,
        shape: Vec<usize>,
        mask: Vec<bool>,
    },
}

/// A bounded domain discretized on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    h: f64,
    origin: Vec<f64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    cells: Vec<usize>,
    slot: Vec<u32>,
}

/// Build a domain from a descriptor.
pub fn make_domain(spec: &DomainSpec) -> Result<Domain> {
    match spec {
        DomainSpec::Box {
            lower,
            upper,
            cells,
        } => {
            let dim = lower.len();
            if dim == 0 || upper.len() != dim || cells.len() != dim {
                return Err(Error::InvalidArgument(
                    "box bounds and cell counts must share one dimension >= 1".into(),
                ));
            }
            let mut spacing = Vec::with_capacity(dim);
            for a in 0..dim {
                let width = upper[a] - lower[a];
                if !(width > 0.0) || !width.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "degenerate box interval on axis {a}"
                    )));
                }
                if cells[a] == 0 {
                    return Err(Error::EmptyDomain);
                }
                spacing.push(width / cells[a] as f64);
            }
            let h = spacing[0];
            if spacing.iter().any(|s| ((s - h) / h).abs() > 1e-9) {
                return Err(Error::Anisotropic);
            }
            let total = cells.iter().product();
            Domain::build(DomainKind::Box, h, lower.clone(), cells.clone(), vec![true; total])
        }
        DomainSpec::Ball { dim, radius, h } => {
            if *dim == 0 || !(*radius > 0.0) || !(*h > 0.0) {
                return Err(Error::InvalidArgument(
                    "ball needs dim >= 1, radius > 0 and h > 0".into(),
                ));
            }
            let per_axis = ((2.0 * radius / h) - 1e-9).ceil().max(1.0) as usize;
            let lo = -(per_axis as f64) * h / 2.0;
            let shape = vec![per_axis; *dim];
            let origin = vec![lo; *dim];
            let total: usize = shape.iter().product();
            let r2 = radius * radius;
            let mut mask = vec![false; total];
            let mut idx = vec![0usize; *dim];
            for (flat, m) in mask.iter_mut().enumerate() {
                unravel(flat, &shape, &mut idx);
                let d2: f64 = idx
                    .iter()
                    .map(|&i| {
                        let c = lo + (i as f64 + 0.5) * h;
                        c * c
                    })
                    .sum();
                *m = d2 <= r2;
            }
            Domain::build(DomainKind::Ball { radius: *radius }, *h, origin, shape, mask)
        }
        DomainSpec::Mask {
            h,
            origin,
            shape,
            mask,
        } => {
            if shape.is_empty() || origin.len() != shape.len() || !(*h > 0.0) {
                return Err(Error::InvalidArgument(
                    "mask needs matching origin/shape and h > 0".into(),
                ));
            }
            let total: usize = shape.iter().product();
            if mask.len() != total {
                return Err(Error::LengthMismatch {
                    expected: total,
                    found: mask.len(),
                });
            }
            Domain::build(DomainKind::Mask, *h, origin.clone(), shape.clone(), mask.clone())
        }
    }
}

fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for a in (0..shape.len()).rev() {
        out[a] = flat % shape[a];
        flat /= shape[a];
    }
}

impl Domain {
    fn build(
        kind: DomainKind,
        h: f64,
        origin: Vec<f64>,
        shape: Vec<usize>,
        mask: Vec<bool>,
    ) -> Result<Domain> {
        let dim = shape.len();
        let mut strides = vec![1usize; dim];
        for a in (0..dim.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        let mut slot = vec![OUTSIDE; mask.len()];
        let mut cells = Vec::new();
        for (flat, &inside) in mask.iter().enumerate() {
            if inside {
                slot[flat] = cells.len() as u32;
                cells.push(flat);
            }
        }
        if cells.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(Domain {
            kind,
            h,
            origin,
            shape,
            strides,
            cells,
            slot,
        })
    }

    /// `[0, 1]^n` split into `cells` cells per axis.
    pub fn unit_box(dim: usize, cells: usize) -> Result<Domain> {
        make_domain(&DomainSpec::Box {
            lower: vec![0.0; dim],
            upper: vec![1.0; dim],
            cells: vec![cells; dim],
        })
    }

    /// Ball of `radius` centered at the origin.
    pub fn ball(dim: usize, radius: f64, h: f64) -> Result<Domain> {
        make_domain(&DomainSpec::Ball { dim, radius, h })
    }

    /// Sub-domain keeping the interior cells whose centers satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(&[f64]) -> bool) -> Result<Domain> {
        let mut mask = vec![false; self.slot.len()];
        let mut x = vec![0.0; self.dim()];
        for (i, &flat) in self.cells.iter().enumerate() {
            self.center_into(i, &mut x);
            mask[flat] = keep(&x);
        }
        Domain::build(
            DomainKind::Mask,
            self.h,
            self.origin.clone(),
            self.shape.clone(),
            mask,
        )
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Lower corner of the bounding grid.
    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    /// Cells per axis of the bounding grid.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Bounding box as per-axis `(lower, upper)` intervals.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        self.origin
            .iter()
            .zip(&self.shape)
            .map(|(&o, &s)| (o, o + s as f64 * self.h))
            .collect()
    }

    /// Number of interior cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim() as i32)
    }

    /// Area of one cell face.
    pub fn face_area(&self) -> f64 {
        self.h.powi(self.dim() as i32 - 1)
    }

    /// `|Ω|` = interior cell count × `h^n`.
    pub fn measure(&self) -> f64 {
        self.len() as f64 * self.cell_volume()
    }

    /// True when every cell of the bounding grid is interior, so that the
    /// boundary consists of axis-aligned faces only.
    pub fn is_full_box(&self) -> bool {
        self.cells.len() == self.slot.len()
    }

    /// Mask over the bounding grid, row-major.
    pub fn mask(&self) -> Vec<bool> {
        self.slot.iter().map(|&s| s != OUTSIDE).collect()
    }

    /// Flat bounding-grid index of interior cell `i`.
    pub fn flat_index(&self, i: usize) -> usize {
        self.cells[i]
    }

    /// Multi-index of interior cell `i`.
    pub fn multi_index(&self, i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        unravel(self.cells[i], &self.shape, &mut idx);
        idx
    }

    /// Writes the center of interior cell `i` into `out`.
    pub fn center_into(&self, i: usize, out: &mut [f64]) {
        let mut flat = self.cells[i];
        for a in (0..self.dim()).rev() {
            let k = flat % self.shape[a];
            flat /= self.shape[a];
            out[a] = self.origin[a] + (k as f64 + 0.5) * self.h;
        }
    }

    pub fn center(&self, i: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.center_into(i, &mut x);
        x
    }

    /// Interior neighbor of cell `i` one step along `axis` in direction
    /// `forward`, or `None` when that face lies on the domain boundary.
    pub fn neighbor(&self, i: usize, axis: usize, forward: bool) -> Option<usize> {
        let flat = self.cells[i];
        let k = (flat / self.strides[axis]) % self.shape[axis];
        let next = if forward {
            if k + 1 >= self.shape[axis] {
                return None;
            }
            flat + self.strides[axis]
        } else {
            if k == 0 {
                return None;
            }
            flat - self.strides[axis]
        };
        match self.slot[next] {
            OUTSIDE => None,
            s => Some(s as usize),
        }
    }

    /// Interior faces as `(cell, neighbor, axis)` with `neighbor` the forward
    /// neighbor along `axis`.
    pub fn interior_faces(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (0..self.dim()).filter_map(move |a| self.neighbor(i, a, true).map(|j| (i, j, a)))
        })
    }

    /// Boundary faces as `(cell, axis, forward)`: faces of interior cells
    /// whose other side is outside the domain.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (0..self.dim()).flat_map(move |a| {
                [false, true]
                    .into_iter()
                    .filter(move |&fw| self.neighbor(i, a, fw).is_none())
                    .map(move |fw| (i, a, fw))
            })
        })
    }

    /// Center of the face of cell `i` on `axis` in direction `forward`.
    pub fn face_center(&self, i: usize, axis: usize, forward: bool) -> Vec<f64> {
        let mut x = self.center(i);
        x[axis] += if forward { 0.5 } else { -0.5 } * self.h;
        x
    }
}

/// Values of a function at the interior cell centers of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: Arc<Domain>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps `values` (one per interior cell, in cell order). Values must be
    /// finite.
    pub fn new(domain: Arc<Domain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::SingularSample(format!("cell {i}")));
        }
        Ok(GridFunction { domain, values })
    }

    pub fn constant(domain: Arc<Domain>, c: f64) -> Result<Self> {
        let n = domain.len();
        GridFunction::new(domain, vec![c; n])
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn h(&self) -> f64 {
        self.domain.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `f` cellwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.domain.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Combines two functions on the same domain cellwise.
    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<GridFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        GridFunction::new(self.domain.clone(), values)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Discrete `L^p` norm, `(Σ |v|^p h^n)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let vol = self.domain.cell_volume();
        let s = crate::numeric::csum(self.values.iter().map(|v| v.abs().powf(p) * vol));
        s.powf(1.0 / p)
    }

    /// Measure of the zero set `{|u| <= tol}`.
    pub fn zero_set_measure(&self, tol: f64) -> f64 {
        self.values.iter().filter(|v| v.abs() <= tol).count() as f64 * self.domain.cell_volume()
    }
}

/// Samples `f` at every interior cell center.
pub fn sample(domain: &Arc<Domain>, f: impl Fn(&[f64]) -> f64) -> Result<GridFunction> {
    let mut x = vec![0.0; domain.dim()];
    let mut values = Vec::with_capacity(domain.len());
    for i in 0..domain.len() {
        domain.center_into(i, &mut x);
        let v = f(&x);
        if !v.is_finite() {
            return Err(Error::SingularSample(format!("cell {i} at {x:?}")));
        }
        values.push(v);
    }
    GridFunction::new(domain.clone(), values)
}

/// The ball `Ω̃` centered at the origin with the same measure as a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallDomain {
    dim: usize,
    measure: f64,
    radius: f64,
    unit_volume: f64,
}

impl BallDomain {
    pub fn with_measure(dim: usize, measure: f64) -> Result<Self> {
        if dim == 0 || !(measure > 0.0) || !measure.is_finite() {
            return Err(Error::InvalidArgument(
                "ball needs dim >= 1 and a positive measure".into(),
            ));
        }
        let unit_volume = unit_ball_volume(dim);
        Ok(BallDomain {
            dim,
            measure,
            radius: (measure / unit_volume).powf(1.0 / dim as f64),
            unit_volume,
        })
    }

    /// `Ω̃` for the given domain.
    pub fn of(domain: &Domain) -> Self {
        // a Domain always has positive measure
        BallDomain::with_measure(domain.dim(), domain.measure()).expect("domain measure is positive")
    }

    /// Concentric ball `Ω̃_ε` of measure `|Ω| - ε`.
    pub fn shrunk(&self, eps: f64) -> Result<Self> {
        BallDomain::with_measure(self.dim, self.measure - eps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|Ω̃|`, equal to the source measure by construction.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `c_n`.
    pub fn unit_volume(&self) -> f64 {
        self.unit_volume
    }

    /// Volume coordinate `s = c_n |x|^n`.
    pub fn volume_coordinate(&self, radius: f64) -> f64 {
        self.unit_volume * radius.powi(self.dim as i32)
    }

    /// Radius of the concentric ball of volume `s`.
    pub fn radius_of_volume(&self, s: f64) -> f64 {
        (s.max(0.0) / self.unit_volume).powf(1.0 / self.dim as f64)
    }
}
