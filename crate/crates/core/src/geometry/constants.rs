//! Relative isoperimetric constant `Q`, boundary-trace constant `𝒞`, and
//! the constants `γ` of the isoperimetric-type condition
//! `P_Ω{u > t} ≥ γ μ(t)^{1-1/n}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::level::{threshold_grid, FaceWeighting, LevelScan, THRESHOLD_CAP};
use crate::error::{Error, Result};
use crate::grid::{sample, Domain, GridFunction};
use crate::numeric::{fmt_real, isoperimetric_factor};

/// Candidate sets searched when estimating `Q` and `𝒞`: half-spaces
/// `{x·d > c}` for each direction `d` and every threshold `c`, plus the
/// super-level sets of each probe function.
#[derive(Debug, Clone)]
pub struct SearchFamily {
    pub directions: Vec<Vec<f64>>,
    pub probes: Vec<(String, GridFunction)>,
    pub threshold_cap: usize,
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let l = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / l).collect()
}

/// Unit directions up to sign: angles `kπ/90` in the plane; in higher
/// dimensions the nonzero vectors of `{-1, 0, 1}^n` with first nonzero
/// entry positive, plus a Fibonacci lattice on the upper hemisphere when
/// `n = 3`.
pub fn default_directions(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0]],
        2 => (0..90)
            .map(|k| {
                let a = k as f64 * std::f64::consts::PI / 90.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            let total = 3usize.pow(dim as u32);
            for code in 1..total {
                let mut c = code;
                let v: Vec<f64> = (0..dim)
                    .map(|_| {
                        let digit = c % 3;
                        c /= 3;
                        digit as f64 - 1.0
                    })
                    .collect();
                let first = v.iter().find(|&&x| x != 0.0);
                if first.is_some_and(|&x| x > 0.0) {
                    out.push(normalized(v));
                }
            }
            if dim == 3 {
                let k = 64;
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                for i in 0..k {
                    let z = 1.0 - (i as f64 + 0.5) / k as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    out.push(vec![r * phi.cos(), r * phi.sin(), z]);
                }
            }
            out
        }
    }
}

impl SearchFamily {
    /// Default directions plus the probes `-|x - corner|` for every corner
    /// of the bounding box and `-|x - center|`.
    pub fn default_for(domain: &Arc<Domain>) -> Result<Self> {
        let bb = domain.bounding_box();
        let n = domain.dim();
        let mut points = Vec::new();
        for mask in 0..(1usize << n) {
            let p: Vec<f64> = (0..n)
                .map(|a| if mask >> a & 1 == 1 { bb[a].1 } else { bb[a].0 })
                .collect();
            points.push((format!("corner{mask}"), p));
        }
        points.push(("center".into(), bb.iter().map(|(a, b)| 0.5 * (a + b)).collect()));
        let mut probes = Vec::new();
        for (name, p) in points {
            let g = sample(domain, |x| {
                -x.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            })?;
            probes.push((name, g));
        }
        Ok(SearchFamily {
            directions: default_directions(n),
            probes,
            threshold_cap: THRESHOLD_CAP,
        })
    }

    pub fn with_probe(mut self, name: impl Into<String>, g: GridFunction) -> Self {
        self.probes.push((name.into(), g));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty() && self.probes.is_empty()
    }
}

/// Best ratio found by a search, with the set attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEstimate {
    pub value: f64,
    pub witness: String,
    pub candidates: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Target {
    Q,
    C,
}

fn best_in_scan(scan: &LevelScan, cap: usize, target: Target, dim: usize) -> (f64, f64, usize) {
    let total = scan.total_measure();
    let e = 1.0 - 1.0 / dim as f64;
    let ts = threshold_grid(scan.sorted_values(), cap);
    let mut best = (f64::NEG_INFINITY, f64::NAN, 0usize);
    // the largest value gives the empty set
    for &t in &ts[..ts.len().saturating_sub(1)] {
        let m = scan.measure(t);
        let p = scan.perimeter(t);
        if p <= 0.0 || m <= 0.0 || m >= total {
            continue;
        }
        let mut consider = |r: f64| {
            best.2 += 1;
            if r > best.0 {
                best.0 = r;
                best.1 = t;
            }
        };
        match target {
            Target::Q => consider(m.min(total - m).powf(e) / p),
            Target::C => {
                if m <= 0.5 * total {
                    consider(scan.trace(t) / p);
                }
                if total - m <= 0.5 * total {
                    consider(scan.trace_below(t) / p);
                }
            }
        }
    }
    best
}

fn search(domain: &Arc<Domain>, family: &SearchFamily, target: Target) -> Result<ConstantEstimate> {
    if family.is_empty() {
        return Err(Error::EmptySearch);
    }
    let n = domain.dim();
    let cap = family.threshold_cap;
    let cuts: Vec<Result<(f64, String, usize)>> = family
        .directions
        .par_iter()
        .map(|d| {
            let proj = sample(domain, |x| x.iter().zip(d).map(|(a, b)| a * b).sum())?;
            let scan = LevelScan::new(&proj, &FaceWeighting::Normal(d.clone()))?;
            let (v, t, k) = best_in_scan(&scan, cap, target, n);
            let dir: Vec<String> = d.iter().map(|c| format!("{c:.6}")).collect();
            Ok((v, format!("cut d=({}) c={}", dir.join(","), fmt_real(t)), k))
        })
        .collect();
    let probes: Vec<Result<(f64, String, usize)>> = family
        .probes
        .par_iter()
        .map(|(name, g)| {
            if !g.domain().same_grid(domain) {
                return Err(Error::DomainMismatch);
            }
            let scan = LevelScan::new(g, &FaceWeighting::GradientNormal)?;
            let (v, t, k) = best_in_scan(&scan, cap, target, n);
            Ok((v, format!("probe {name} t={}", fmt_real(t)), k))
        })
        .collect();
    let mut best: Option<ConstantEstimate> = None;
    let mut candidates = 0;
    for r in cuts.into_iter().chain(probes) {
        let (v, witness, k) = r?;
        candidates += k;
        if k > 0 && best.as_ref().is_none_or(|b| v > b.value) {
            best = Some(ConstantEstimate {
                value: v,
                witness,
                candidates: 0,
            });
        }
    }
    let mut best = best.ok_or(Error::EmptySearch)?;
    best.candidates = candidates;
    Ok(best)
}

/// Largest `min(|E|, |Ω∖E|)^{1-1/n} / P_Ω(E)` over the search family: a
/// lower bound on the best relative isoperimetric constant of the domain.
pub fn estimate_q(domain: &Arc<Domain>, family: &SearchFamily) -> Result<ConstantEstimate> {
    search(domain, family, Target::Q)
}

/// Largest `H_{n-1}(∂E ∩ ∂Ω) / P_Ω(E)` over sets of the family with
/// `|E| ≤ |Ω|/2`: a lower bound on the best boundary-trace constant.
pub fn estimate_c(domain: &Arc<Domain>, family: &SearchFamily) -> Result<ConstantEstimate> {
    search(domain, family, Target::C)
}

/// How a constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantMethod {
    Analytic,
    Searched,
}

impl fmt::Display for ConstantMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantMethod::Analytic => "analytic",
            ConstantMethod::Searched => "searched",
        })
    }
}

impl FromStr for ConstantMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(ConstantMethod::Analytic),
            "searched" => Ok(ConstantMethod::Searched),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// `Q` and `𝒞` of a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricConstants {
    pub q: f64,
    pub c: f64,
    pub method: ConstantMethod,
}

impl IsoperimetricConstants {
    pub fn new(q: f64, c: f64, method: ConstantMethod) -> Result<Self> {
        for (name, v) in [("Q", q), ("C", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be finite and positive")));
            }
        }
        Ok(IsoperimetricConstants { q, c, method })
    }

    /// Both constants searched with the default family.
    pub fn search(domain: &Arc<Domain>) -> Result<Self> {
        let family = SearchFamily::default_for(domain)?;
        let q = estimate_q(domain, &family)?.value;
        let c = estimate_c(domain, &family)?.value;
        IsoperimetricConstants::new(q, c, ConstantMethod::Searched)
    }
}

/// The five situations in which the condition holds with an explicit `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GammaCase {
    /// `u` has compact support in `Ω`.
    I,
    /// `|supp u| ≤ |Ω|/2`.
    II,
    /// `u` vanishes on a set of measure `ε`.
    III,
    /// `u` vanishes on `F ⊆ ∂Ω` with `H_{n-1}(F) = ε`.
    IV,
    /// `u` vanishes on a closed `F ⊆ Ω` whose projection has measure `ε`.
    V,
}

impl fmt::Display for GammaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaCase::I => "i",
            GammaCase::II => "ii",
            GammaCase::III => "iii",
            GammaCase::IV => "iv",
            GammaCase::V => "v",
        })
    }
}

impl FromStr for GammaCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" => Ok(GammaCase::I),
            "ii" => Ok(GammaCase::II),
            "iii" => Ok(GammaCase::III),
            "iv" => Ok(GammaCase::IV),
            "v" => Ok(GammaCase::V),
            _ => Err(Error::InvalidArgument(format!("unknown case `{s}`"))),
        }
    }
}

/// Inputs from which `γ` is computed; which ones are needed depends on the
/// case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaInputs {
    pub dim: usize,
    pub measure: f64,
    pub q: Option<f64>,
    pub c: Option<f64>,
    pub eps: Option<f64>,
}

impl GammaInputs {
    pub fn new(dim: usize, measure: f64) -> Self {
        GammaInputs {
            dim,
            measure,
            q: None,
            c: None,
            eps: None,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }
}

/// A `γ` together with the case and inputs it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCertificate {
    pub gamma: f64,
    pub case: GammaCase,
    pub inputs: GammaInputs,
}

fn positive(name: &'static str, v: Option<f64>) -> Result<f64> {
    let v = v.ok_or(Error::MissingConstant(name))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::out_of_range(name, format!("{v} is not positive")));
    }
    Ok(v)
}

/// `α = ε / (|Ω| - ε)`.
pub fn alpha(eps: f64, measure: f64) -> f64 {
    eps / (measure - eps)
}

/// `γ` of the given case.
pub fn gamma_for_case(case: GammaCase, inputs: GammaInputs) -> Result<GammaCertificate> {
    let n = inputs.dim;
    if n < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let m = inputs.measure;
    let e = 1.0 - 1.0 / n as f64;
    let gamma = match case {
        GammaCase::I => isoperimetric_factor(n),
        GammaCase::II => 1.0 / positive("Q", inputs.q)?,
        GammaCase::III => {
            let q = positive("Q", inputs.q)?;
            let eps = positive("eps", inputs.eps)?;
            if eps >= 0.5 * m {
                return Err(Error::out_of_range("eps", format!("{eps} not in (0, |Ω|/2)")));
            }
            alpha(eps, m).powf(e) / q
        }
        GammaCase::IV | GammaCase::V => {
            let q = positive("Q", inputs.q)?;
            let c = positive("C", inputs.c)?;
            let eps = positive("eps", inputs.eps)?;
            let c = if case == GammaCase::V { c + 1.0 } else { c };
            (1.0 / q).min(eps / (c * m.powf(e)))
        }
    };
    Ok(GammaCertificate {
        gamma,
        case,
        inputs,
    })
}

impl GammaCertificate {
    /// `n c_n^{1/n} / γ`, the gradient constant `L` the certificate yields.
    pub fn gradient_constant(&self) -> f64 {
        isoperimetric_factor(self.inputs.dim) / self.gamma
    }

    /// Whether `gamma` matches its case formula recomputed from the inputs.
    pub fn is_consistent(&self) -> bool {
        gamma_for_case(self.case, self.inputs)
            .is_ok_and(|c| (c.gamma - self.gamma).abs() <= 1e-12 * self.gamma.abs())
    }
}

/// Contents of an `RCONST v1` file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstantsRecord {
    pub q: Option<(f64, ConstantMethod)>,
    pub c: Option<(f64, ConstantMethod)>,
    pub gamma: Option<GammaCertificate>,
}

impl ConstantsRecord {
    pub fn from_constants(k: &IsoperimetricConstants) -> Self {
        ConstantsRecord {
            q: Some((k.q, k.method)),
            c: Some((k.c, k.method)),
            gamma: None,
        }
    }

    pub fn q(&self) -> Result<f64> {
        self.q.map(|p| p.0).ok_or(Error::MissingConstant("Q"))
    }

    pub fn c(&self) -> Result<f64> {
        self.c.map(|p| p.0).ok_or(Error::MissingConstant("C"))
    }
}

const MAGIC: &str = "RCONST v1";

pub fn render_constants(r: &ConstantsRecord) -> String {
    let mut out = format!("{MAGIC}\n");
    if let Some((v, m)) = r.q {
        out += &format!("Q={} method={m}\n", fmt_real(v));
    }
    if let Some((v, m)) = r.c {
        out += &format!("C={} method={m}\n", fmt_real(v));
    }
    if let Some(g) = &r.gamma {
        out += &format!(
            "gamma={} case={} n={} measure={}",
            fmt_real(g.gamma),
            g.case,
            g.inputs.dim,
            fmt_real(g.inputs.measure)
        );
        for (k, v) in [("Q", g.inputs.q), ("C", g.inputs.c), ("eps", g.inputs.eps)] {
            if let Some(v) = v {
                out += &format!(" {k}={}", fmt_real(v));
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_constants(text: &str) -> Result<ConstantsRecord> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(Error::format(1, format!("expected `{MAGIC}`"))),
    }
    let mut rec = ConstantsRecord::default();
    for (i, line) in lines {
        let ln = i + 1;
        let mut fields = Vec::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::format(ln, format!("expected key=value, got `{tok}`")))?;
            fields.push((k, v));
        }
        let real = |v: &str| v.parse::<f64>().map_err(|_| Error::format(ln, format!("bad number `{v}`")));
        let get = |key: &str| fields.iter().find(|f| f.0 == key).map(|f| f.1);
        match fields[0].0 {
            "Q" | "C" => {
                let v = real(fields[0].1)?;
                let m: ConstantMethod = get("method")
                    .ok_or_else(|| Error::format(ln, "missing method"))?
                    .parse()
                    .map_err(|e: Error| Error::format(ln, e.to_string()))?;
                if fields[0].0 == "Q" {
                    rec.q = Some((v, m));
                } else {
                    rec.c = Some((v, m));
                }
            }
            "gamma" => {
                let gamma = real(fields[0].1)?;
                let need = |k: &str| get(k).ok_or_else(|| Error::format(ln, format!("missing {k}")));
                let case: GammaCase = need("case")?.parse().map_err(|e: Error| Error::format(ln, e.to_string()))?;
                let dim = need("n")?
                    .parse::<usize>()
                    .map_err(|_| Error::format(ln, "bad dimension"))?;
                let measure = real(need("measure")?)?;
                let opt = |k: &str| get(k).map(real).transpose();
                let inputs = GammaInputs {
                    dim,
                    measure,
                    q: opt("Q")?,
                    c: opt("C")?,
                    eps: opt("eps")?,
                };
                rec.gamma = Some(GammaCertificate { gamma, case, inputs });
            }
            other => return Err(Error::format(ln, format!("unknown record `{other}`"))),
        }
    }
    Ok(rec)
}

pub fn write_constants(r: &ConstantsRecord, path: &std::path::Path) -> Result<()> {
    crate::io::write_atomic(path, &render_constants(r))
}

pub fn read_constants(path: &std::path::Path) -> Result<ConstantsRecord> {
    parse_constants(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_q_from_center_cut() {
        let d = Arc::new(Domain::unit_box(2, 64).unwrap());
        let fam = SearchFamily::default_for(&d).unwrap();
        let q = estimate_q(&d, &fam).unwrap();
        assert!(q.value >= 0.5f64.sqrt() - 1e-12, "{q:?}");
        // half-planes and corner balls cannot beat the straight cut by much
        assert!(q.value < 0.75, "{q:?}");
    }

    #[test]
    fn unit_square_c_from_half_strip() {
        let d = Arc::new(Domain::unit_box(2, 64).unwrap());
        let fam = SearchFamily::default_for(&d).unwrap();
        let c = estimate_c(&d, &fam).unwrap();
        // the left half has trace 2 and relative perimeter 1; tilted cuts
        // add O(h) staircase noise on top
        assert!(c.value >= 2.0 - 1e-12, "{c:?}");
        assert!(c.value <= 2.0 + 2.0 / 64.0, "{c:?}");
    }

    #[test]
    fn disk_q_attained_by_diameter() {
        let h = 1.0 / 128.0;
        let d = Arc::new(Domain::ball(2, 1.0, h).unwrap());
        let fam = SearchFamily {
            directions: vec![vec![1.0, 0.0]],
            probes: vec![],
            threshold_cap: usize::MAX,
        };
        let q = estimate_q(&d, &fam).unwrap();
        // (π/2)^{1/2} / 2 for the half disk
        let exact = (std::f64::consts::PI / 2.0).sqrt() / 2.0;
        assert!((q.value / exact - 1.0).abs() < 0.01, "{q:?}");
        assert!(q.witness.contains("c=0") || q.witness.contains("c=-"), "{q:?}");
    }

    #[test]
    fn empty_family_rejected() {
        let d = Arc::new(Domain::unit_box(2, 8).unwrap());
        let fam = SearchFamily {
            directions: vec![],
            probes: vec![],
            threshold_cap: 512,
        };
        assert!(matches!(estimate_q(&d, &fam), Err(Error::EmptySearch)));
    }

    #[test]
    fn gamma_cases() {
        let pi = std::f64::consts::PI;
        let g = gamma_for_case(GammaCase::I, GammaInputs::new(2, 1.0)).unwrap();
        assert!((g.gamma - 2.0 * pi.sqrt()).abs() < 1e-14);
        let g = gamma_for_case(GammaCase::II, GammaInputs::new(2, 1.0).with_q(1.0)).unwrap();
        assert_eq!(g.gamma, 1.0);
        let g = gamma_for_case(GammaCase::III, GammaInputs::new(2, 1.0).with_q(1.0).with_eps(0.25)).unwrap();
        assert!((g.gamma - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(g.is_consistent());
        let err = gamma_for_case(GammaCase::III, GammaInputs::new(2, 1.0).with_q(1.0).with_eps(0.6));
        assert!(matches!(err, Err(Error::OutOfRange { .. })));
        let err = gamma_for_case(GammaCase::IV, GammaInputs::new(2, 1.0).with_q(1.0).with_eps(1.0));
        assert!(matches!(err, Err(Error::MissingConstant("C"))));
        let iv = gamma_for_case(GammaCase::IV, GammaInputs::new(2, 4.0).with_q(0.5).with_c(2.0).with_eps(1.0)).unwrap();
        assert_eq!(iv.gamma, 0.25);
        let v = gamma_for_case(GammaCase::V, GammaInputs::new(2, 4.0).with_q(0.5).with_c(2.0).with_eps(1.0)).unwrap();
        assert!((v.gamma - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn constants_round_trip() {
        let g = gamma_for_case(GammaCase::V, GammaInputs::new(3, 2.5).with_q(0.7).with_c(1.3).with_eps(0.2)).unwrap();
        let rec = ConstantsRecord {
            q: Some((0.7, ConstantMethod::Searched)),
            c: Some((1.3, ConstantMethod::Analytic)),
            gamma: Some(g),
        };
        let text = render_constants(&rec);
        assert_eq!(parse_constants(&text).unwrap(), rec);
        assert!(parse_constants("RCONST v1\nQ=1\n").is_err());
        assert!(parse_constants("RCONST v1\nZ=1 method=analytic\n").is_err());
    }
}
