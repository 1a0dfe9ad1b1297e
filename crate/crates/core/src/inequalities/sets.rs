use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{boundary_calibration, gradient_magnitude};
use crate::grid::{Domain, GridFunction};

/// A portion `F` of `∂Ω`, as a set of boundary faces `(cell, axis, forward)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    domain: Arc<Domain>,
    faces: Vec<(usize, usize, bool)>,
}

impl BoundarySet {
    /// Boundary faces whose centers satisfy `keep`.
    pub fn from_predicate(domain: &Arc<Domain>, keep: impl Fn(&[f64]) -> bool) -> Self {
        let faces = domain
            .boundary_faces()
            .filter(|&(i, a, f)| keep(&domain.face_center(i, a, f)))
            .collect();
        BoundarySet {
            domain: domain.clone(),
            faces,
        }
    }

    /// All of `∂Ω`.
    pub fn all(domain: &Arc<Domain>) -> Self {
        BoundarySet::from_predicate(domain, |_| true)
    }

    /// Faces of boundary cells where `|u| ≤ tol`.
    pub fn where_small(u: &GridFunction, tol: f64) -> Self {
        let d = u.domain();
        let faces = d
            .boundary_faces()
            .filter(|&(i, _, _)| u.values()[i].abs() <= tol)
            .collect();
        BoundarySet {
            domain: d.clone(),
            faces,
        }
    }

    pub fn faces(&self) -> &[(usize, usize, bool)] {
        &self.faces
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// `H_{n-1}(F)`.
    pub fn measure(&self) -> f64 {
        self.faces.len() as f64 * self.domain.face_area() * boundary_calibration(&self.domain)
    }

    /// Largest `|u|` over cells adjacent to `F`.
    pub fn max_abs_on(&self, u: &GridFunction) -> Result<f64> {
        if !self.domain.same_grid(u.domain()) {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .faces
            .iter()
            .map(|&(i, _, _)| u.values()[i].abs())
            .fold(0.0, f64::max))
    }
}

/// A set of cells, used for zero sets inside `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSet {
    domain: Arc<Domain>,
    members: Vec<bool>,
}

impl CellSet {
    pub fn from_predicate(domain: &Arc<Domain>, keep: impl Fn(&[f64]) -> bool) -> Self {
        let members = (0..domain.len()).map(|i| keep(&domain.center(i))).collect();
        CellSet {
            domain: domain.clone(),
            members,
        }
    }

    /// Cells where `|u| ≤ tol`.
    pub fn where_small(u: &GridFunction, tol: f64) -> Self {
        CellSet {
            domain: u.domain().clone(),
            members: u.values().iter().map(|v| v.abs() <= tol).collect(),
        }
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

    /// `H_{n-1}` of the projection along `axis` onto the orthogonal
    /// coordinate hyperplane.
    pub fn projection_measure(&self, axis: usize) -> f64 {
        let mut shadow = BTreeSet::new();
        for (i, _) in self.members.iter().enumerate().filter(|p| *p.1) {
            let mut idx = self.domain.multi_index(i);
            idx.remove(axis);
            shadow.insert(idx);
        }
        shadow.len() as f64 * self.domain.face_area()
    }

    /// Largest coordinate projection measure, with its axis.
    pub fn max_projection_measure(&self) -> (usize, f64) {
        (0..self.domain.dim())
            .map(|a| (a, self.projection_measure(a)))
            .fold((0, 0.0), |best, p| if p.1 > best.1 { p } else { best })
    }

    pub fn max_abs_on(&self, u: &GridFunction) -> Result<f64> {
        if !self.domain.same_grid(u.domain()) {
            return Err(Error::DomainMismatch);
        }
        Ok(u.values()
            .iter()
            .zip(&self.members)
            .filter(|p| *p.1)
            .map(|p| p.0.abs())
            .fold(0.0, f64::max))
    }
}

/// Values within `h · max|Du|` of zero count as vanishing: a cell center
/// lies half a cell from the boundary or from a zero set between centers.
pub fn vanishing_tolerance(u: &GridFunction) -> Result<f64> {
    Ok(u.h() * gradient_magnitude(u)?.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::sample;

    #[test]
    fn left_edge_of_square() {
        let d = Arc::new(Domain::unit_box(2, 16).unwrap());
        let f = BoundarySet::from_predicate(&d, |x| x[0] == 0.0);
        assert_eq!(f.measure(), 1.0);
        assert_eq!(BoundarySet::all(&d).measure(), 4.0);
        let u = sample(&d, |x| x[0]).unwrap();
        assert_eq!(f.max_abs_on(&u).unwrap(), 1.0 / 32.0);
        // the corner cells contribute their top and bottom faces as well
        let g = BoundarySet::where_small(&u, vanishing_tolerance(&u).unwrap());
        assert_eq!(g.measure(), 1.0 + 2.0 / 16.0);
    }

    #[test]
    fn diameter_projection() {
        let h = 1.0 / 64.0;
        let d = Arc::new(Domain::ball(2, 1.0, h).unwrap());
        let u = sample(&d, |x| x[1].abs()).unwrap();
        let z = CellSet::where_small(&u, vanishing_tolerance(&u).unwrap());
        let (axis, eps) = z.max_projection_measure();
        assert_eq!(axis, 1);
        assert!((eps - 2.0).abs() < 4.0 * h, "{eps}");
        assert!(z.max_abs_on(&u).unwrap() <= h);
    }
}
