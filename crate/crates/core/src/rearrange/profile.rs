use crate::error::{Error, Result};
use crate::grid::BallDomain;

/// Right-continuous step function on `[0, |Ω|]`.
///
/// Holds `u*`: interval `i` is `[breaks[i], breaks[i + 1])` with value
/// `values[i]`. The last breakpoint is `|Ω|`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepProfile {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breaks.len() != values.len() + 1 {
            return Err(Error::InvalidArgument(
                "a step profile needs k >= 1 values and k + 1 breakpoints".into(),
            ));
        }
        if breaks[0] != 0.0 {
            return Err(Error::InvalidArgument("first breakpoint must be 0".into()));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("breakpoints must increase strictly".into()));
        }
        if values.iter().chain(&breaks).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("profile entries must be finite".into()));
        }
        Ok(StepProfile { breaks, values })
    }

    /// Profile with `values.len()` intervals of common length `width`.
    pub fn uniform(values: Vec<f64>, width: f64) -> Result<Self> {
        let breaks = (0..=values.len()).map(|i| i as f64 * width).collect();
        StepProfile::new(breaks, values)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total length, `|Ω|`.
    pub fn measure(&self) -> f64 {
        *self.breaks.last().expect("non-empty")
    }

    /// Index of the interval containing `s` (left endpoint convention,
    /// clamped to `[0, |Ω|]`).
    pub fn interval_of(&self, s: f64) -> usize {
        let k = self.breaks.partition_point(|&b| b <= s);
        k.saturating_sub(1).min(self.values.len() - 1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.values[self.interval_of(s)]
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    /// Measure of `{s : p(s) > t}`.
    pub fn distribution(&self, t: f64) -> f64 {
        if self.is_nonincreasing() {
            self.breaks[self.values.partition_point(|&v| v > t)]
        } else {
            crate::numeric::csum(
                self.values
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v > t)
                    .map(|(i, _)| self.breaks[i + 1] - self.breaks[i]),
            )
        }
    }

    /// Applies `f` to every interval value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> StepProfile {
        StepProfile {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `Σ |v_i|^p |I_i|`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        crate::numeric::csum(self.intervals().map(|(a, b, v)| v.abs().powf(p) * (b - a)))
    }

    /// Iterates `(start, end, value)`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    fn prefix_integrals(&self) -> Vec<f64> {
        let mut acc = crate::numeric::CompensatedSum::new();
        let mut out = Vec::with_capacity(self.breaks.len());
        out.push(0.0);
        for (a, b, v) in self.intervals() {
            acc.add(v * (b - a));
            out.push(acc.value());
        }
        out
    }

    /// Piecewise-linear view for differentiation.
    ///
    /// `u*` of a sampled function is a staircase whose individual steps
    /// carry lattice-counting noise, so it is differentiated at the scale
    /// of concentric shells of `Ω̃` with radial thickness `thickness`: each
    /// shell contributes one node at its volume-coordinate midpoint with the
    /// mean of the profile over the shell. Falls back to interval midpoints
    /// when fewer than three shells fit.
    pub fn shell_view(&self, ball: &BallDomain, thickness: f64) -> LinearProfile {
        let m = self.measure();
        let mut edges = vec![0.0];
        if thickness > 0.0 {
            let mut j = 1usize;
            loop {
                let e = ball.volume_coordinate(j as f64 * thickness);
                if e >= m {
                    break;
                }
                edges.push(e);
                j += 1;
            }
        }
        // merge a sliver last shell into its neighbor
        if edges.len() >= 2 {
            let last = edges[edges.len() - 1];
            let prev = edges[edges.len() - 2];
            if m - last < 0.5 * (last - prev) {
                edges.pop();
            }
        }
        edges.push(m);
        if edges.len() < 4 {
            let nodes = self.intervals().map(|(a, b, _)| 0.5 * (a + b)).collect();
            return LinearProfile::new(nodes, self.values.clone(), m)
                .expect("interval midpoints increase strictly");
        }
        let prefix = self.prefix_integrals();
        let integral_to = |s: f64| {
            let k = self.interval_of(s);
            prefix[k] + self.values[k] * (s - self.breaks[k])
        };
        let mut nodes = Vec::with_capacity(edges.len() - 1);
        let mut values = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            nodes.push(0.5 * (w[0] + w[1]));
            values.push((integral_to(w[1]) - integral_to(w[0])) / (w[1] - w[0]));
        }
        LinearProfile::new(nodes, values, m).expect("shell midpoints increase strictly")
    }
}

/// Continuous piecewise-linear function on `[0, |Ω|]` through
/// `(nodes[i], values[i])`, constant before the first and after the last
/// node.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
    measure: f64,
}

impl LinearProfile {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, measure: f64) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(Error::InvalidArgument(
                "linear profile needs matching non-empty nodes and values".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("nodes must increase strictly".into()));
        }
        if nodes[0] < 0.0 || *nodes.last().unwrap() > measure {
            return Err(Error::InvalidArgument("nodes must lie in [0, |Ω|]".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("profile values must be finite".into()));
        }
        Ok(LinearProfile {
            nodes,
            values,
            measure,
        })
    }

    /// Interpolant of `f` at the given nodes.
    pub fn from_fn(measure: f64, nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = nodes.iter().map(|&s| f(s)).collect();
        LinearProfile::new(nodes, values, measure)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn eval(&self, s: f64) -> f64 {
        let k = self.nodes.partition_point(|&x| x <= s);
        if k == 0 {
            return self.values[0];
        }
        if k == self.nodes.len() {
            return self.values[k - 1];
        }
        let (a, b) = (self.nodes[k - 1], self.nodes[k]);
        let t = (s - a) / (b - a);
        self.values[k - 1] + t * (self.values[k] - self.values[k - 1])
    }

    /// Linear pieces `(start, end, slope)` between consecutive nodes.
    /// The constant end pieces have zero slope and are omitted.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(s, v)| (s[0], s[1], (v[1] - v[0]) / (s[1] - s[0])))
    }

    /// Applies `f` to the nodal values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> LinearProfile {
        LinearProfile {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            measure: self.measure,
        }
    }
}
