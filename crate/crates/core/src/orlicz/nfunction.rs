use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::numeric::fmt_real;

/// The families of N-functions understood by the crate.
#[derive(Debug, Clone)]
pub enum NKind {
    /// `A(r) = r^p`, `p > 1`.
    Power { p: f64 },
    /// `A(r) = r^p log(1 + r)`, `p ≥ 1`.
    PLog { p: f64 },
    /// A closed-form expression in `r`.
    Custom { expr: Expression },
}

/// An N-function `A`: convex, `A(0) = 0`, `A(t)/t → 0` at `0` and `→ ∞`
/// at infinity.
#[derive(Debug, Clone)]
pub struct NFunction {
    kind: NKind,
}

/// Log-spaced probe points `10^a ..= 10^b`, `per_decade` per decade.
pub(crate) fn log_probes(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    let k = ((b - a) * per_decade as f64).round() as usize;
    (0..=k).map(|i| 10f64.powf(a + (b - a) * i as f64 / k as f64)).collect()
}

impl NFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::NFunction(format!("r^p is an N-function only for p > 1, got {p}")));
        }
        Ok(NFunction { kind: NKind::Power { p } })
    }

    pub fn p_log(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::NFunction(format!("r^p log(1+r) needs p >= 1, got {p}")));
        }
        Ok(NFunction { kind: NKind::PLog { p } })
    }

    /// An expression in `r`, checked numerically on probes spanning
    /// `10^-6 ..= 10^6`: `A(0) = 0`, midpoint convexity, and the two
    /// limits of `A(t)/t` judged at the probe extremes.
    pub fn custom(text: &str) -> Result<Self> {
        let expr = Expression::scalar(text, "r")?;
        let a = NFunction {
            kind: NKind::Custom { expr },
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let at0 = self.eval(0.0);
        if !(at0.abs() <= 1e-12) {
            return Err(Error::NFunction(format!("A(0) = {at0}, expected 0")));
        }
        let ts = log_probes(-6.0, 6.0, 8);
        for w in ts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb, fm) = (self.eval(a), self.eval(b), self.eval(0.5 * (a + b)));
            if fa.is_nan() || fb.is_nan() || fm.is_nan() || fa < 0.0 {
                return Err(Error::NFunction(format!("A is not a nonnegative real near t = {a}")));
            }
            // absolute slack absorbs cancellation in forms like e^r - r - 1
            if fb.is_finite() && fm > 0.5 * (fa + fb) * (1.0 + 1e-9) + 1e-15 {
                return Err(Error::NFunction(format!("A is not convex on [{a}, {b}]")));
            }
        }
        let (lo, hi) = (ts[0], ts[ts.len() - 1]);
        if self.eval(lo) / lo > 1e-3 {
            return Err(Error::NFunction("A(t)/t does not vanish as t → 0".into()));
        }
        if self.eval(hi) / hi < 1e3 {
            return Err(Error::NFunction("A(t)/t does not blow up as t → ∞".into()));
        }
        Ok(())
    }

    pub fn kind(&self) -> &NKind {
        &self.kind
    }

    /// `A(t)` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            NKind::Power { p } => t.powf(*p),
            NKind::PLog { p } => t.powf(*p) * t.ln_1p(),
            NKind::Custom { expr } => {
                let v = expr.eval1(t);
                // inf - inf from overflowing terms, e.g. exp(r) - r - 1
                if v.is_nan() && t > 1.0 {
                    f64::INFINITY
                } else {
                    v
                }
            }
        }
    }

    /// `p` when `A(r) = r^p`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            NKind::Power { p } => Some(p),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            NKind::Power { .. } => "power-p",
            NKind::PLog { .. } => "p-log",
            NKind::Custom { .. } => "custom",
        }
    }
}

impl fmt::Display for NFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NKind::Power { p } => write!(f, "tag=power-p p={}", fmt_real(*p)),
            NKind::PLog { p } => write!(f, "tag=p-log p={}", fmt_real(*p)),
            NKind::Custom { expr } => write!(f, "tag=custom expr={}", expr.text()),
        }
    }
}

/// Outcome of the `Δ₂` classification `A(2t) ≤ δ A(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2 {
    pub global: bool,
    pub near_infinity: bool,
    /// `δ` valid for all `t > 0` (when `global`), or the probe supremum.
    pub delta: f64,
    /// `δ` valid for `t ≥ t0` (when `near_infinity`).
    pub delta_infinity: f64,
    pub t0: f64,
    /// `formula` for tagged families, `probe` for custom ones.
    pub method: &'static str,
}

/// Classifies `A` over probes in `[lo, hi]`, which must span at least 12
/// decades. Exact for tagged families; for custom `A` the ratio
/// `A(2t)/A(t)` is probed, and `Δ₂` near infinity is declared when the
/// ratios over the top two decades are finite and not growing.
pub fn delta2_classify(a: &NFunction, lo: f64, hi: f64) -> Result<Delta2> {
    if !(lo > 0.0 && hi > lo && (hi / lo).log10() >= 12.0 - 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "probe range [{lo}, {hi}] spans fewer than 12 decades"
        )));
    }
    match a.kind {
        NKind::Power { p } => {
            let d = 2f64.powf(p);
            return Ok(Delta2 {
                global: true,
                near_infinity: true,
                delta: d,
                delta_infinity: d,
                t0: 0.0,
                method: "formula",
            });
        }
        NKind::PLog { p } => {
            // log(1+2t) ≤ 2 log(1+t), with the ratio decreasing to 1
            let d = 2f64.powf(p);
            return Ok(Delta2 {
                global: true,
                near_infinity: true,
                delta: 2.0 * d,
                delta_infinity: d * 3f64.ln() / 2f64.ln(),
                t0: 1.0,
                method: "formula",
            });
        }
        NKind::Custom { .. } => {}
    }
    let ts = log_probes(lo.log10(), hi.log10(), 20);
    let mut ratios = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (at, a2t) = (a.eval(t), a.eval(2.0 * t));
        let fail = || Error::NFunction(format!("classification failure at t = {t}"));
        if at.is_nan() || a2t.is_nan() || at <= 0.0 || a2t < 0.0 {
            return Err(fail());
        }
        // overflow of A counts as unbounded growth, not as an error
        ratios.push(if at.is_finite() && a2t.is_finite() { a2t / at } else { f64::INFINITY });
    }
    let top = 40.min(ratios.len() / 2);
    let n = ratios.len();
    let last = ratios[n - top / 2..].iter().cloned().fold(0.0, f64::max);
    let prev = ratios[n - top..n - top / 2].iter().cloned().fold(0.0, f64::max);
    let near_infinity = last.is_finite() && last <= prev * (1.0 + 1e-6);
    let sup = ratios.iter().cloned().fold(0.0, f64::max);
    let global = near_infinity && sup.is_finite();
    Ok(Delta2 {
        global,
        near_infinity,
        delta: sup,
        delta_infinity: if near_infinity { prev.max(last) } else { f64::INFINITY },
        t0: ts[n - top],
        method: "probe",
    })
}

const MAGIC: &str = "NFUNC v1";

/// Parses either a full `NFUNC v1` file or a bare descriptor line such as
/// `tag=p-log p=2`.
pub fn parse_nfunc(text: &str) -> Result<NFunction> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|p| !p.1.is_empty())
        .collect();
    let body = match lines.as_slice() {
        [(_, m), rest @ ..] if *m == MAGIC => rest,
        all => all,
    };
    let [(ln, line)] = body else {
        return Err(Error::format(1, "expected one descriptor line"));
    };
    let ln = *ln;
    let rest = line
        .strip_prefix("tag=")
        .ok_or_else(|| Error::format(ln, "expected `tag=`"))?;
    let (tag, params) = rest.split_once(' ').unwrap_or((rest, ""));
    let params = params.trim();
    let p = || -> Result<f64> {
        params
            .strip_prefix("p=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::format(ln, "expected `p=<real>`"))
    };
    let wrap = |e: Error| Error::format(ln, e.to_string());
    match tag {
        "power-p" => NFunction::power(p()?).map_err(wrap),
        "p-log" => NFunction::p_log(p()?).map_err(wrap),
        "custom" => {
            let expr = params
                .strip_prefix("expr=")
                .ok_or_else(|| Error::format(ln, "expected `expr=<expression>`"))?;
            NFunction::custom(expr).map_err(wrap)
        }
        _ => Err(Error::format(ln, format!("unknown tag `{tag}`"))),
    }
}

pub fn render_nfunc(a: &NFunction) -> String {
    format!("{MAGIC}\n{a}\n")
}
