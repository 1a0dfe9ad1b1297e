//! `RPROF v1`: `|Omega|=<real>` then one `s_i value_i` line per interval.

use std::fmt::Write as _;
use std::path::Path;

use super::StepProfile;
use crate::error::{Error, Result};

const MAGIC: &str = "RPROF v1";

pub fn render_profile(p: &StepProfile) -> String {
    let mut out = format!("{MAGIC}\n|Omega|={}\n", p.measure());
    for (a, _, v) in p.intervals() {
        let _ = writeln!(out, "{a} {v}");
    }
    out
}

pub fn write_profile(p: &StepProfile, path: &Path) -> Result<()> {
    crate::io::write_atomic(path, &render_profile(p))
}

pub fn read_profile(path: &Path) -> Result<StepProfile> {
    parse_profile(&std::fs::read_to_string(path)?)
}

pub fn parse_profile(text: &str) -> Result<StepProfile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        Some((i, _)) => return Err(Error::format(i + 1, format!("expected `{MAGIC}`"))),
        None => return Err(Error::format(1, "empty profile")),
    }
    let (ln, measure_line) = lines.next().ok_or_else(|| Error::format(2, "missing |Omega|"))?;
    let measure: f64 = measure_line
        .trim()
        .strip_prefix("|Omega|=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::format(ln + 1, "expected `|Omega|=<real>`"))?;
    let mut breaks = Vec::new();
    let mut values = Vec::new();
    for (i, l) in lines {
        let mut it = l.split_whitespace();
        let parsed = (|| Some((it.next()?.parse::<f64>().ok()?, it.next()?.parse::<f64>().ok()?)))();
        let (s, v) = parsed.ok_or_else(|| Error::format(i + 1, "expected `s value`"))?;
        if it.next().is_some() {
            return Err(Error::format(i + 1, "trailing tokens"));
        }
        breaks.push(s);
        values.push(v);
    }
    breaks.push(measure);
    StepProfile::new(breaks, values).map_err(|e| Error::format(0, e.to_string()))
}
