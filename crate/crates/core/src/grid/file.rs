//! `RGRID v1` text format.
//!
//! ```text
//! RGRID v1
//! n=<dim> h=<spacing> [origin=<x0>,<x1>,...]
//! <cells axis 0> <cells axis 1> ...
//! mask=<inline|full>
//! [one 0/1 per bounding-grid cell, when inline]
//! one value per interior cell, row-major
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::{make_domain, Domain, DomainSpec, GridFunction};
use crate::error::{Error, Result};

const MAGIC: &str = "RGRID v1";

/// Serializes a grid function. Values use the shortest round-trip decimal.
pub fn render_grid(u: &GridFunction) -> String {
    let d = u.domain();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let origin: Vec<String> = d.origin().iter().map(|o| format!("{o}")).collect();
    let _ = writeln!(out, "n={} h={} origin={}", d.dim(), d.h(), origin.join(","));
    let shape: Vec<String> = d.shape().iter().map(|s| s.to_string()).collect();
    out.push_str(&shape.join(" "));
    out.push('\n');
    if d.is_full_box() {
        out.push_str("mask=full\n");
    } else {
        out.push_str("mask=inline\n");
        for m in d.mask() {
            out.push_str(if m { "1\n" } else { "0\n" });
        }
    }
    for v in u.values() {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Writes `u` to `path` via a temporary file and rename.
pub fn write_grid(u: &GridFunction, path: &Path) -> Result<()> {
    crate::io::write_atomic(path, &render_grid(u))
}

pub fn read_grid(path: &Path) -> Result<GridFunction> {
    parse_grid(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok((i + 1, l.trim()))
            }
            None => Err(Error::format(self.last + 1, format!("unexpected end of file, expected {what}"))),
        }
    }
}

pub fn parse_grid(text: &str) -> Result<GridFunction> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (ln, magic) = lines.next("header")?;
    if magic != MAGIC {
        return Err(Error::format(ln, format!("expected `{MAGIC}`")));
    }

    let (ln, params) = lines.next("`n=.. h=..`")?;
    let mut dim = None;
    let mut h = None;
    let mut origin = None;
    for tok in params.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::format(ln, format!("malformed token `{tok}`")))?;
        match k {
            "n" => dim = Some(v.parse::<usize>().map_err(|_| Error::format(ln, "bad dimension"))?),
            "h" => h = Some(v.parse::<f64>().map_err(|_| Error::format(ln, "bad spacing"))?),
            "origin" => {
                let o: std::result::Result<Vec<f64>, _> = v.split(',').map(str::parse).collect();
                origin = Some(o.map_err(|_| Error::format(ln, "bad origin"))?);
            }
            _ => return Err(Error::format(ln, format!("unknown key `{k}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::format(ln, "missing n"))?;
    let h = h.ok_or_else(|| Error::format(ln, "missing h"))?;
    if dim == 0 || !(h > 0.0) || !h.is_finite() {
        return Err(Error::format(ln, "n must be >= 1 and h > 0"));
    }
    let origin = origin.unwrap_or_else(|| vec![0.0; dim]);
    if origin.len() != dim {
        return Err(Error::format(ln, "origin length differs from n"));
    }

    let (ln, extents) = lines.next("axis cell counts")?;
    let shape: std::result::Result<Vec<usize>, _> = extents.split_whitespace().map(str::parse).collect();
    let shape = shape.map_err(|_| Error::format(ln, "bad cell count"))?;
    if shape.len() != dim {
        return Err(Error::format(
            ln,
            format!("header n={dim} but {} axis extents", shape.len()),
        ));
    }
    let total: usize = shape.iter().product();

    let (ln, mask_line) = lines.next("mask mode")?;
    let mask = match mask_line {
        "mask=full" => vec![true; total],
        "mask=inline" => {
            let mut m = Vec::with_capacity(total);
            for _ in 0..total {
                let (ln, l) = lines.next("mask entry")?;
                m.push(match l {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::format(ln, "mask entries must be 0 or 1")),
                });
            }
            m
        }
        _ => return Err(Error::format(ln, "expected mask=inline or mask=full")),
    };

    let full = mask.iter().all(|&b| b);
    let domain = if full {
        let upper = origin
            .iter()
            .zip(&shape)
            .map(|(o, &s)| o + s as f64 * h)
            .collect();
        let d = make_domain(&DomainSpec::Box {
            lower: origin.clone(),
            upper,
            cells: shape.clone(),
        })?;
        if d.h() == h {
            d
        } else {
            make_domain(&DomainSpec::Mask { h, origin, shape, mask })?
        }
    } else {
        make_domain(&DomainSpec::Mask { h, origin, shape, mask })?
    };
    let domain = Arc::new(domain);

    let mut values = Vec::with_capacity(domain.len());
    for _ in 0..domain.len() {
        let (ln, l) = lines.next("value")?;
        let v: f64 = l
            .parse()
            .map_err(|_| Error::format(ln, format!("bad value `{l}`")))?;
        if !v.is_finite() {
            return Err(Error::SingularSample(format!("line {ln}")));
        }
        values.push(v);
    }
    for (i, l) in lines.inner.by_ref() {
        if !l.trim().is_empty() {
            return Err(Error::format(i + 1, "trailing data after values"));
        }
    }
    GridFunction::new(domain, values)
}

impl Domain {
    pub(crate) fn same_grid(&self, other: &Domain) -> bool {
        self.h == other.h && self.origin == other.origin && self.shape == other.shape && self.cells == other.cells
    }
}
