//! The profile `u*(s) = √(|Ω| - s)`: arranged increasingly,
//! `u(x) = u*(|Ω| - c_n|x|^n)` has finite Dirichlet energy for `n ≥ 2`,
//! while its Schwarz symmetrization does not.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{mirrored_radial_energy, radial_energy};
use crate::grid::BallDomain;
use crate::numeric::{fmt_real, ls_slope, unit_ball_volume};
use crate::rearrange::LinearProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleKind {
    /// `u*(s) = √(|Ω| - s) ≥ 0`.
    Interior,
    /// `u*(s) = √(|Ω| - s) - √|Ω| ≤ 0`, which vanishes on `∂Ω` once
    /// arranged increasingly.
    H10,
}

impl fmt::Display for CounterexampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CounterexampleKind::Interior => "interior",
            CounterexampleKind::H10 => "H10",
        })
    }
}

impl FromStr for CounterexampleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "interior" => Ok(CounterexampleKind::Interior),
            "h10" => Ok(CounterexampleKind::H10),
            _ => Err(Error::InvalidArgument(format!("unknown counterexample `{s}`"))),
        }
    }
}

/// Truncated energies `E(ε) = ∫_{Ω̃_ε} |Dũ|²` along a ladder of `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleTrace {
    pub dim: usize,
    pub kind: CounterexampleKind,
    pub measure: f64,
    pub eps: Vec<f64>,
    pub energies: Vec<f64>,
    pub ln_inv_eps: Vec<f64>,
    /// Least-squares slope of `E` against `ln(1/ε)` over the finer half of
    /// the ladder.
    pub slope: f64,
    /// Energy of the increasing arrangement over the same truncations.
    pub source_energies: Vec<f64>,
    /// Slope of `source_energies`, fitted like `slope`.
    pub source_slope: f64,
    /// Energy of the increasing arrangement over the whole domain.
    pub source_energy: f64,
}

/// Ladder `ε_k = |Ω| 2^{-k}`, `k = 1..=16`.
pub const LADDER: usize = 16;

/// Nodes per halving of `|Ω| - s` in the linear view of the profile.
const NODES_PER_OCTAVE: usize = 64;

/// Linear interpolant of the counterexample profile on `|Ω|` with nodes
/// graded geometrically toward `s = |Ω|`, containing every ladder point.
pub fn counterexample_profile(measure: f64, kind: CounterexampleKind, octaves: usize) -> Result<LinearProfile> {
    let total = octaves * NODES_PER_OCTAVE;
    let mut nodes: Vec<f64> = (0..=total)
        .map(|j| {
            if j % NODES_PER_OCTAVE == 0 {
                measure - measure * 0.5f64.powi((j / NODES_PER_OCTAVE) as i32)
            } else {
                measure - measure * 0.5f64.powf(j as f64 / NODES_PER_OCTAVE as f64)
            }
        })
        .collect();
    nodes.push(measure);
    let shift = match kind {
        CounterexampleKind::Interior => 0.0,
        CounterexampleKind::H10 => measure.sqrt(),
    };
    LinearProfile::from_fn(measure, nodes, |s| (measure - s).max(0.0).sqrt() - shift)
}

/// Builds the profile on the unit ball of dimension `dim` and evaluates
/// the truncated energies over the default ladder.
pub fn run_counterexample(dim: usize, kind: CounterexampleKind) -> Result<CounterexampleTrace> {
    if dim < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let measure = unit_ball_volume(dim);
    let ball = BallDomain::with_measure(dim, measure)?;
    let p = counterexample_profile(measure, kind, LADDER + 8)?;
    let mut eps = Vec::with_capacity(LADDER);
    let mut energies = Vec::with_capacity(LADDER);
    let mut source_energies = Vec::with_capacity(LADDER);
    for k in 1..=LADDER {
        let e = measure * 0.5f64.powi(k as i32);
        eps.push(e);
        energies.push(radial_energy(&p, &ball, 0.0, measure - e)?);
        source_energies.push(mirrored_radial_energy(&p, &ball, 0.0, measure - e)?);
    }
    let ln_inv_eps: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    // the O(ε) correction of E biases a fit over the coarse rungs
    let half = LADDER / 2;
    let slope = ls_slope(&ln_inv_eps[half..], &energies[half..]);
    let source_slope = ls_slope(&ln_inv_eps[half..], &source_energies[half..]);
    let source_energy = mirrored_radial_energy(&p, &ball, 0.0, measure)?;
    Ok(CounterexampleTrace {
        dim,
        kind,
        measure,
        eps,
        energies,
        ln_inv_eps,
        slope,
        source_energies,
        source_slope,
        source_energy,
    })
}

impl CounterexampleTrace {
    /// Whether `E(ε)` increases strictly as `ε` decreases.
    pub fn is_increasing(&self) -> bool {
        self.energies.windows(2).all(|w| w[1] > w[0])
    }

    /// CSV with columns `eps,E,ln_inv_eps` and a trailing `slope=` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,E,ln_inv_eps\n");
        for i in 0..self.eps.len() {
            out += &format!(
                "{},{},{}\n",
                fmt_real(self.eps[i]),
                fmt_real(self.energies[i]),
                fmt_real(self.ln_inv_eps[i])
            );
        }
        out += &format!("slope={}\n", fmt_real(self.slope));
        out
    }
}

/// Rows and slope of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCsv {
    pub eps: Vec<f64>,
    pub energies: Vec<f64>,
    pub ln_inv_eps: Vec<f64>,
    pub slope: f64,
}

pub fn parse_trace_csv(text: &str) -> Result<TraceCsv> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "eps,E,ln_inv_eps")) => {}
        _ => return Err(Error::format(1, "expected header `eps,E,ln_inv_eps`")),
    }
    let mut t = TraceCsv {
        eps: vec![],
        energies: vec![],
        ln_inv_eps: vec![],
        slope: f64::NAN,
    };
    let mut slope = None;
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if slope.is_some() {
            return Err(Error::format(ln, "data after slope trailer"));
        }
        if let Some(v) = line.strip_prefix("slope=") {
            slope = Some(v.parse().map_err(|_| Error::format(ln, "bad slope"))?);
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::format(ln, "bad number"))?;
        if cols.len() != 3 {
            return Err(Error::format(ln, "expected three columns"));
        }
        t.eps.push(cols[0]);
        t.energies.push(cols[1]);
        t.ln_inv_eps.push(cols[2]);
    }
    t.slope = slope.ok_or_else(|| Error::format(0, "missing slope trailer"))?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn plane_trace_matches_closed_form() {
        let t = run_counterexample(2, CounterexampleKind::Interior).unwrap();
        assert_eq!(t.eps.len(), 16);
        assert!(t.is_increasing());
        for (e, en) in t.eps.iter().zip(&t.energies) {
            let exact = PI * PI * (PI / e).ln() - PI * PI + PI * e;
            assert!((en - exact).abs() < 1e-3 * exact, "{e}: {en} vs {exact}");
        }
        assert!((t.slope / (PI * PI) - 1.0).abs() < 0.01, "{}", t.slope);
        assert!((t.source_energy / (PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn shifted_profile_has_same_slope() {
        let a = run_counterexample(2, CounterexampleKind::Interior).unwrap();
        let b = run_counterexample(2, CounterexampleKind::H10).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-9 * a.slope);
    }

    #[test]
    fn line_energies_both_diverge() {
        // in one dimension both weights are 1: E(ε) = ln(|Ω|/ε) for the
        // symmetrization and for the source alike
        let t = run_counterexample(1, CounterexampleKind::Interior).unwrap();
        assert!((t.slope - 1.0).abs() < 1e-3, "{}", t.slope);
        for (a, b) in t.energies.iter().zip(&t.source_energies) {
            assert!((a - b).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = run_counterexample(3, CounterexampleKind::Interior).unwrap();
        let csv = t.to_csv();
        let back = parse_trace_csv(&csv).unwrap();
        assert_eq!(back.eps, t.eps);
        assert_eq!(back.energies, t.energies);
        assert_eq!(back.slope, t.slope);
        assert_eq!(csv.lines().count(), 18);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(run_counterexample(0, CounterexampleKind::Interior).is_err());
    }
}
