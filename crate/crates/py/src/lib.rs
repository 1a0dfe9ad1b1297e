//! Python bindings: grids, rearrangements, constants and the verifiers.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use rearrange_core::geometry::{gamma_for_case, GammaCase, GammaInputs, IsoperimetricConstants};
use rearrange_core::grid::{parse_grid, read_grid, render_grid, write_grid};
use rearrange_core::inequalities::{
    run_counterexample, vanishing_tolerance, verify_cor_1_6, verify_cor_2_2, verify_thm_1_1,
    verify_thm_1_2, verify_thm_1_3, verify_thm_1_4, verify_thm_2_1, BoundarySet, CellSet,
};
use rearrange_core::orlicz::{load_nfunc, verify_orlicz_local, verify_orlicz_polya_szego};
use rearrange_core::rearrange::render_profile;
use rearrange_core::suite::{run_suite, SuiteConfig};
use rearrange_core::{Domain, Error, GridFunction, InequalityReport, StepProfile};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for rearrange_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A function sampled at the cell centers of a box or ball grid.
#[pyclass(name = "Grid", frozen)]
struct Grid(GridFunction);

#[pymethods]
impl Grid {
    /// Values on the unit box `[0,1]^n` with `cells` cells per axis, in row-major order.
    #[staticmethod]
    #[pyo3(signature = (values, n = 2, cells = None))]
    fn unit_box(values: Vec<f64>, n: usize, cells: Option<usize>) -> PyResult<Self> {
        let cells = match cells {
            Some(c) => c,
            None => (values.len() as f64).powf(1.0 / n as f64).round() as usize,
        };
        let d = Domain::unit_box(n, cells).py()?;
        Ok(Grid(GridFunction::new(Arc::new(d), values).py()?))
    }

    /// Sample an expression in `x1..xn` and `r` on the unit box or a centered ball.
    #[staticmethod]
    #[pyo3(signature = (expr, h, n = 2, ball_radius = None))]
    fn sample(expr: &str, h: f64, n: usize, ball_radius: Option<f64>) -> PyResult<Self> {
        let d = match ball_radius {
            Some(r) => Domain::ball(n, r, h).py()?,
            None => Domain::unit_box(n, (1.0 / h).round() as usize).py()?,
        };
        Ok(Grid(rearrange_core::expr::sample_expression(&Arc::new(d), expr).py()?))
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Grid(read_grid(&path).py()?))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Grid(parse_grid(text).py()?))
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        write_grid(&self.0, &path).py()
    }

    fn to_text(&self) -> String {
        render_grid(&self.0)
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.domain().dim()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h()
    }

    #[getter]
    fn measure(&self) -> f64 {
        self.0.domain().measure()
    }

    fn lp_norm(&self, p: f64) -> f64 {
        self.0.lp_norm(p)
    }

    /// `|{u > t}|`.
    fn distribution(&self, t: f64) -> f64 {
        rearrange_core::distribution(&self.0, t)
    }

    fn decreasing_rearrangement(&self) -> Profile {
        Profile(rearrange_core::decreasing_rearrangement(&self.0))
    }

    /// The symmetrized function resampled on a ball grid of the same spacing.
    fn symmetrize(&self) -> PyResult<Grid> {
        Ok(Grid(rearrange_core::schwarz(&self.0).resample().py()?))
    }

    fn __len__(&self) -> usize {
        self.0.values().len()
    }

    fn __repr__(&self) -> String {
        format!("Grid(n={}, cells={}, h={})", self.dim(), self.0.values().len(), self.h())
    }
}

/// The decreasing rearrangement as a step function on `[0, |Ω|]`.
#[pyclass(name = "Profile", frozen)]
struct Profile(StepProfile);

#[pymethods]
impl Profile {
    #[getter]
    fn breaks(&self) -> Vec<f64> {
        self.0.breaks().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn measure(&self) -> f64 {
        self.0.measure()
    }

    fn __call__(&self, s: f64) -> f64 {
        self.0.eval(s)
    }

    fn distribution(&self, t: f64) -> f64 {
        self.0.distribution(t)
    }

    fn lp_norm(&self, p: f64) -> f64 {
        self.0.lp_norm_pow(p).powf(1.0 / p)
    }

    fn to_text(&self) -> String {
        render_profile(&self.0)
    }
}

#[pyclass(name = "Report", frozen)]
struct Report(InequalityReport);

#[pymethods]
impl Report {
    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn lhs(&self) -> f64 {
        self.0.lhs
    }

    #[getter]
    fn rhs(&self) -> f64 {
        self.0.rhs
    }

    #[getter]
    fn constant(&self) -> f64 {
        self.0.constant
    }

    #[getter]
    fn margin(&self) -> f64 {
        self.0.margin
    }

    /// `holds`, `violated` or `vacuous`.
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    #[getter]
    fn meta(&self) -> BTreeMap<String, String> {
        self.0.meta.clone()
    }

    fn ratio(&self) -> f64 {
        self.0.ratio()
    }

    fn __repr__(&self) -> String {
        format!("Report({} {} lhs={} rhs={})", self.0.name, self.0.verdict, self.0.lhs, self.0.rhs)
    }
}

/// `(Q, C)` searched on the grid's domain; both are lower bounds of the best constants.
#[pyfunction]
fn search_constants(u: &Grid) -> PyResult<(f64, f64)> {
    let k = IsoperimetricConstants::search(u.0.domain()).py()?;
    Ok((k.q, k.c))
}

/// Run one verifier. `thm` is one of 1.1, 1.2, 1.3, 1.4, 1.6, 2.1, 2.2,
/// orlicz-global, orlicz-local; `q` and `c` are searched when omitted.
#[pyfunction]
#[pyo3(signature = (u, thm, eps = None, case = "i", nfunc = None, q = None, c = None, other = None))]
#[allow(clippy::too_many_arguments)]
fn verify(
    u: &Grid,
    thm: &str,
    eps: Option<f64>,
    case: &str,
    nfunc: Option<&str>,
    q: Option<f64>,
    c: Option<f64>,
    other: Option<&Grid>,
) -> PyResult<Report> {
    let u = &u.0;
    let d = u.domain();
    let mut searched = None;
    let mut constants = || -> PyResult<IsoperimetricConstants> {
        if searched.is_none() {
            searched = Some(IsoperimetricConstants::search(d).py()?);
        }
        Ok(searched.unwrap())
    };
    let q = match q {
        Some(q) => q,
        None if !matches!(thm, "1.1" | "1.6" | "orlicz-global") || case != "i" => constants()?.q,
        None => f64::NAN,
    };
    let c = match c {
        Some(c) => c,
        None if matches!(thm, "1.3" | "1.4") || matches!(case, "iv" | "v") => constants()?.c,
        None => f64::NAN,
    };
    let local_eps = eps.unwrap_or(0.1 * d.measure());
    let cert = || -> PyResult<_> {
        let case: GammaCase = case.parse().py()?;
        let mut inputs = GammaInputs::new(d.dim(), d.measure());
        if case != GammaCase::I {
            inputs = inputs.with_q(q);
        }
        if matches!(case, GammaCase::IV | GammaCase::V) {
            inputs = inputs.with_c(c);
        }
        let e = match (eps, case) {
            (Some(e), _) => Some(e),
            (None, GammaCase::III) => Some(u.zero_set_measure(0.0)),
            (None, GammaCase::IV) => Some(BoundarySet::where_small(u, vanishing_tolerance(u).py()?).measure()),
            (None, GammaCase::V) => {
                Some(CellSet::where_small(u, vanishing_tolerance(u).py()?).max_projection_measure().1)
            }
            _ => None,
        };
        if let Some(e) = e {
            inputs = inputs.with_eps(e);
        }
        gamma_for_case(case, inputs).py()
    };
    let a = || -> PyResult<_> {
        let text = nfunc.ok_or_else(|| PyValueError::new_err(format!("nfunc is required for {thm}")))?;
        load_nfunc(text).py()
    };
    let r = match thm {
        "1.1" => verify_thm_1_1(u, &cert()?),
        "1.2" => verify_thm_1_2(u, q),
        "1.3" => verify_thm_1_3(u, q, c, &BoundarySet::where_small(u, vanishing_tolerance(u).py()?)),
        "1.4" => verify_thm_1_4(u, q, c, &CellSet::where_small(u, vanishing_tolerance(u).py()?)),
        "1.6" => verify_cor_1_6(u, cert()?.gradient_constant()),
        "2.1" => verify_thm_2_1(u, q, local_eps),
        "2.2" => {
            let v = other.ok_or_else(|| PyValueError::new_err("2.2 needs `other`"))?;
            verify_cor_2_2(u, &v.0, q, local_eps)
        }
        "orlicz-global" => verify_orlicz_polya_szego(u, &cert()?, &a()?),
        "orlicz-local" => verify_orlicz_local(u, q, local_eps, &a()?),
        other => return Err(PyValueError::new_err(format!("unknown theorem tag `{other}`"))),
    };
    Ok(Report(r.py()?))
}

/// Luxemburg norm of `u` for an N-function descriptor such as `tag=p-log p=2`.
#[pyfunction]
fn luxemburg_norm(u: &Grid, nfunc: &str) -> PyResult<f64> {
    let a = load_nfunc(nfunc).py()?;
    Ok(rearrange_core::orlicz::luxemburg_norm(&u.0, &a).py()?.value)
}

/// Truncated energies of the counterexample profile: a dict with `eps`,
/// `energies`, `source_energies`, `slope` and `source_energy`.
#[pyfunction]
#[pyo3(signature = (n, kind = "interior"))]
fn counterexample(n: usize, kind: &str) -> PyResult<BTreeMap<&'static str, Vec<f64>>> {
    let t = run_counterexample(n, kind.parse().py()?).py()?;
    Ok(BTreeMap::from([
        ("eps", t.eps),
        ("energies", t.energies),
        ("source_energies", t.source_energies),
        ("slope", vec![t.slope]),
        ("source_energy", vec![t.source_energy]),
    ]))
}

/// The built-in battery; returns reports sorted by name.
#[pyfunction]
#[pyo3(signature = (h = None))]
fn suite(py: Python<'_>, h: Option<f64>) -> PyResult<Vec<Report>> {
    let mut cfg = SuiteConfig::default();
    if let Some(h) = h {
        cfg.h = h;
    }
    let out = py.detach(|| run_suite(&cfg)).py()?;
    Ok(out.reports.into_iter().map(Report).collect())
}

#[pymodule]
fn rearrange_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Grid>()?;
    m.add_class::<Profile>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(search_constants, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(luxemburg_norm, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(suite, m)?)?;
    Ok(())
}
