//! Argument payloads: literals, coefficient lists and `@file` indirection.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use riordan::index::{Filtration, IndexSet};
use riordan::riordan::RiordanElem;
use riordan::series::{CoeffRing, NottSeries, TruncSeries, UnitSeries};

/// The argument itself, or the contents of `path` for `@path`.
pub fn read_arg(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("cannot read {path}")),
        None => Ok(arg.to_string()),
    }
}

fn coeff_list(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| anyhow!("bad coefficient `{}`", c.trim())))
        .collect()
}

/// A series literal, or a comma-separated coefficient list read in `ring` and
/// padded to `trunc` (default: the list length).
pub fn series(arg: &str, ring: Option<CoeffRing>, trunc: Option<usize>) -> Result<TruncSeries> {
    let text = read_arg(arg)?;
    let text = text.trim();
    if text.contains("coeffs=") {
        let s: TruncSeries = text.parse()?;
        if ring.is_some_and(|r| r != s.ring()) {
            bail!("literal ring {} disagrees with --ring", s.ring());
        }
        return Ok(s);
    }
    let ring = ring.ok_or_else(|| anyhow!("--ring is required for coefficient lists"))?;
    let mut coeffs = coeff_list(text)?;
    let trunc = trunc.unwrap_or(coeffs.len() - 1);
    if coeffs.len() > trunc + 1 {
        bail!("{} coefficients do not fit truncation {trunc}", coeffs.len());
    }
    coeffs.resize(trunc + 1, BigInt::from(0));
    Ok(TruncSeries::new(ring, coeffs)?)
}

/// A `riordan` literal, or `<h list>/<g list>`.
pub fn element(arg: &str, ring: Option<CoeffRing>, trunc: Option<usize>) -> Result<RiordanElem> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with("riordan") {
        return Ok(text.parse()?);
    }
    let (h, g) = text.split_once('/').ok_or_else(|| anyhow!("expected `<h>/<g>` or a riordan literal"))?;
    let (h, g) = (h.trim(), g.trim());
    let trunc = trunc.unwrap_or(h.split(',').count().max(g.split(',').count()) - 1);
    let h = UnitSeries::new(series(h, ring, Some(trunc))?)?;
    let g = NottSeries::new(series(g, ring, Some(trunc))?)?;
    Ok(RiordanElem::new(h, g)?)
}

pub fn index_set(arg: &str) -> Result<IndexSet> {
    let text = read_arg(arg)?;
    IndexSet::parse_expr(&text).with_context(|| format!("index set `{}`", text.trim()))
}

pub fn rational(arg: &str) -> Result<BigRational> {
    arg.trim().parse().map_err(|_| anyhow!("bad rational `{arg}`"))
}

/// `identity`, `ceilhalf`, `table:1,1,2,...` or `table:<file>`.
pub fn filtration(arg: &str) -> Result<Filtration> {
    if let Some(rest) = arg.strip_prefix("table:") {
        let inline = rest.bytes().all(|b| b.is_ascii_digit() || b == b',' || b == b' ');
        if !inline {
            let body = fs::read_to_string(rest).with_context(|| format!("cannot read {rest}"))?;
            return Ok(format!("table:{}", body.trim()).parse()?);
        }
    }
    Ok(arg.parse()?)
}
