use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::numeric::fmt_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The right side is infinite or a hypothesis could not be verified.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Vacuous => "vacuous",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "violated" => Ok(Verdict::Violated),
            "vacuous" => Ok(Verdict::Vacuous),
            _ => Err(Error::InvalidArgument(format!("unknown verdict `{s}`"))),
        }
    }
}

/// One checked estimate `lhs ≤ rhs`, where `rhs` carries the multiplicative
/// `constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub meta: BTreeMap<String, String>,
}

impl InequalityReport {
    /// Verdict from the comparison: vacuous for an infinite or undefined
    /// right side, otherwise holds iff `lhs ≤ rhs`.
    pub fn compare(name: &str, lhs: f64, rhs: f64, constant: f64) -> Self {
        let verdict = if !rhs.is_finite() || rhs.is_nan() || lhs.is_nan() {
            Verdict::Vacuous
        } else if lhs <= rhs {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            constant,
            margin: rhs - lhs,
            verdict,
            meta: BTreeMap::new(),
        }
    }

    /// A report whose hypotheses failed; `reason` goes to `meta.reason`.
    pub fn vacuous(name: &str, reason: impl Into<String>) -> Self {
        let mut r = InequalityReport {
            name: name.to_string(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            constant: f64::NAN,
            margin: f64::NAN,
            verdict: Verdict::Vacuous,
            meta: BTreeMap::new(),
        };
        r.meta.insert("reason".into(), reason.into());
        r
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_real(self, key: &str, value: f64) -> Self {
        self.with(key, fmt_real(value))
    }

    /// Records dimension, spacing, grid shape and `|Ω|` of `u`.
    pub fn with_grid(self, u: &GridFunction) -> Self {
        let d = u.domain();
        let shape: Vec<String> = d.shape().iter().map(|k| k.to_string()).collect();
        self.with("n", d.dim())
            .with_real("h", d.h())
            .with("shape", shape.join("x"))
            .with_real("measure", d.measure())
    }

    /// `lhs / rhs`.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

const MAGIC: &str = "RREPORT v1";

fn render_one(r: &InequalityReport, out: &mut String) {
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("name={}\n", r.name));
    for (k, v) in [("lhs", r.lhs), ("rhs", r.rhs), ("constant", r.constant), ("margin", r.margin)] {
        out.push_str(&format!("{k}={}\n", fmt_real(v)));
    }
    out.push_str(&format!("verdict={}\n", r.verdict));
    for (k, v) in &r.meta {
        out.push_str(&format!("meta.{k}={v}\n"));
    }
}

/// Reports as `RREPORT v1` records separated by blank lines.
pub fn render_reports(reports: &[InequalityReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        render_one(r, &mut out);
    }
    out
}

fn parse_real(v: &str, line: usize) -> Result<f64> {
    match v {
        "NaN" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => v.parse().map_err(|_| Error::format(line, format!("bad number `{v}`"))),
    }
}

pub fn parse_reports(text: &str) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, Vec<(usize, String, String)>)> = None;
    let finish = |start: usize, fields: Vec<(usize, String, String)>| -> Result<InequalityReport> {
        let mut r = InequalityReport::vacuous("", "");
        r.meta.clear();
        let mut seen = [false; 6];
        for (ln, k, v) in fields {
            match k.as_str() {
                "name" => (r.name, seen[0]) = (v, true),
                "lhs" => (r.lhs, seen[1]) = (parse_real(&v, ln)?, true),
                "rhs" => (r.rhs, seen[2]) = (parse_real(&v, ln)?, true),
                "constant" => (r.constant, seen[3]) = (parse_real(&v, ln)?, true),
                "margin" => (r.margin, seen[4]) = (parse_real(&v, ln)?, true),
                "verdict" => (r.verdict, seen[5]) = (v.parse().map_err(|e: Error| Error::format(ln, e.to_string()))?, true),
                _ => match k.strip_prefix("meta.") {
                    Some(key) => {
                        r.meta.insert(key.to_string(), v);
                    }
                    None => return Err(Error::format(ln, format!("unknown field `{k}`"))),
                },
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::format(start, "incomplete report record"));
        }
        Ok(r)
    };
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim_end();
        if line == MAGIC {
            if let Some((s, f)) = cur.take() {
                out.push(finish(s, f)?);
            }
            cur = Some((ln, Vec::new()));
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (_, fields) = cur
            .as_mut()
            .ok_or_else(|| Error::format(ln, format!("expected `{MAGIC}`")))?;
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::format(ln, "expected key=value"))?;
        fields.push((ln, k.to_string(), v.to_string()));
    }
    if let Some((s, f)) = cur {
        out.push(finish(s, f)?);
    }
    Ok(out)
}

pub fn write_reports(reports: &[InequalityReport], path: &std::path::Path) -> Result<()> {
    crate::io::write_atomic(path, &render_reports(reports))
}

pub fn read_reports(path: &std::path::Path) -> Result<Vec<InequalityReport>> {
    parse_reports(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(InequalityReport::compare("a", 1.0, 2.0, 1.0).verdict, Verdict::Holds);
        assert_eq!(InequalityReport::compare("a", 2.0, 2.0, 1.0).verdict, Verdict::Holds);
        assert_eq!(InequalityReport::compare("a", 3.0, 2.0, 1.0).verdict, Verdict::Violated);
        assert_eq!(
            InequalityReport::compare("a", 3.0, f64::INFINITY, 1.0).verdict,
            Verdict::Vacuous
        );
    }

    #[test]
    fn round_trip() {
        let a = InequalityReport::compare("thm1.1", 1.0 / 3.0, 2.5e-9, 7.0)
            .with("case", "i")
            .with_real("gamma", 3.5449077018110318);
        let b = InequalityReport::vacuous("cor1.6", "dimension 2");
        let text = render_reports(&[a.clone(), b.clone()]);
        let back = parse_reports(&text).unwrap();
        assert_eq!(back[0], a);
        assert_eq!(back[1].name, b.name);
        assert!(back[1].lhs.is_nan());
        assert_eq!(back[1].meta, b.meta);
        assert_eq!(render_reports(&back), text);
    }

    #[test]
    fn rejects_incomplete() {
        assert!(parse_reports("RREPORT v1\nname=x\nlhs=1\n").is_err());
        assert!(parse_reports("name=x\n").is_err());
    }
}
